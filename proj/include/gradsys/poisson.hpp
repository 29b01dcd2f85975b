#pragma once

#include <functional>
#include <vector>

#include "gradsys/grid.hpp"

namespace gradsys {

inline constexpr double kDefaultPoissonTol = 1e-10;

struct PoissonSolveResult {
  ScalarField solution;
  /// max-norm of the stencil residual over interior nodes
  double residual_norm = 0.0;
  /// residual_norm is accepted when <= tol * residual_scale, with
  /// residual_scale = max(1, max|h|)
  double residual_scale = 1.0;
  int iterations = 0;
  /// || |grad z| ||_1 / ||h||_1 (0 when h vanishes)
  double grad_l1_ratio = 0.0;
};

/// Solve -Lap z = h, z = 0 on the boundary, by Jacobi-preconditioned
/// conjugate gradients on the interior unknowns. Boundary values of h are
/// ignored. Throws SolverError past the iteration cap.
PoissonSolveResult solve_poisson(const ScalarField& h, double tol = kDefaultPoissonTol);

/// Iteration cap: 10 * sqrt(unknowns) * log(1/tol).
int poisson_iteration_cap(std::size_t unknowns, double tol);

using NodalFunction = std::function<double(double x, double y)>;

struct ManufacturedPair {
  NodalFunction source;
  NodalFunction exact;
};

struct ConvergenceStudy {
  std::vector<double> spacings;
  std::vector<double> errors;  ///< max-norm errors
  double order = 0.0;          ///< NaN when some error is exactly zero
};

/// Solve the manufactured problem on each grid size (geometric refinement)
/// and fit log(error) against log(h) by least squares.
ConvergenceStudy convergence_order(const ManufacturedPair& pair, int dim, const std::vector<int>& sizes,
                                   double tol = kDefaultPoissonTol);

ScalarField sample_function(const GridSpec& grid, const NodalFunction& fn);

}  // namespace gradsys
