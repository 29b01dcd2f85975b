#pragma once

#include "gradsys/grid.hpp"
#include "gradsys/schauder.hpp"

namespace gradsys {

struct Sigma0Choice {
  double m0 = 0.0;
  double sigma0 = 0.0;
  /// m0 had to be lowered below min(m, N - eps) before the pair passed the
  /// subcritical admissibility test with q = 1.
  bool adjusted = false;
};

/// m0 = min(m, N - eps) with eps = 1e-3 N; sigma0 = N - eps when
/// m0 >= N/2, else 3 p m0/(p + 2). The pair is checked against the
/// subcritical branch with q = 1; on failure m0 is lowered toward N/(3p')
/// until it passes. Requires p > 1 and m > max(1, N/(3p')).
Sigma0Choice choose_sigma0(double m, double p, int n_dim);

struct BilaplacianOptions {
  double m = 2.0;  ///< integrability of f
  int n_dim = 2;   ///< analytic dimension
  int max_iter = 200;
  double poisson_tol = kDefaultPoissonTol;
};

struct BiharmonicResult {
  ScalarField u;
  ScalarField v;  ///< -Lap u
  IterationReport report;
  Sigma0Choice sigma0;
};

/// Lap^2 u = |grad u|^p + lambda f, u = Lap u = 0 on the boundary, through
/// the system with q = 1, alpha = 0. On convergence u is recomputed from
/// the final v so that -Lap_h u = v holds to solver tolerance. Divergence
/// is reported in the verdict, not thrown.
BiharmonicResult solve_bilaplacian(const ScalarField& f, double lambda, double p, const ThresholdConstants& t,
                                   double tol = 1e-8, const BilaplacianOptions& options = {});

/// Stencil -Lap applied twice with the intermediate field zeroed on the
/// boundary.
ScalarField apply_discrete_bilaplacian(const ScalarField& u);

struct LinearBiharmonic {
  ScalarField u;
  ScalarField v;
};

/// Lap^2 u = h with Navier conditions by two chained Poisson solves.
LinearBiharmonic solve_linear_biharmonic(const ScalarField& h, double tol = kDefaultPoissonTol);

/// Discrete L1 norm over interior nodes of
/// apply_discrete_bilaplacian(u) - |grad u|^p - lambda f.
double cross_validate(const BiharmonicResult& result, const ScalarField& f, double lambda, double p);

}  // namespace gradsys
