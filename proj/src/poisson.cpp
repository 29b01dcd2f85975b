#include "gradsys/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "gradsys/errors.hpp"
#include "gradsys/kernels.hpp"

namespace gradsys {

int poisson_iteration_cap(std::size_t unknowns, double tol) {
  const double cap = 10.0 * std::sqrt(static_cast<double>(unknowns)) * std::log(1.0 / tol);
  return std::max(10, static_cast<int>(std::ceil(cap)));
}

namespace {

double interior_residual(const GridSpec& grid, std::span<const double> x, std::span<const double> b,
                         std::span<double> r) {
  kernels::neg_laplacian(grid, x, r);
  for (std::size_t k = 0; k < r.size(); ++k) r[k] = grid.is_boundary(k) ? 0.0 : b[k] - r[k];
  return kernels::max_abs(r);
}

}  // namespace

PoissonSolveResult solve_poisson(const ScalarField& h, double tol) {
  if (!(tol > 0.0)) throw DomainError("solve_poisson: tol must be positive");
  if (!h.is_finite()) throw DomainError("solve_poisson: right-hand side is not finite");
  const GridSpec& grid = h.grid();
  const std::size_t size = grid.size();
  const double hh = grid.spacing();
  const double diag = 2.0 * grid.dim() / (hh * hh);

  std::vector<double> b(size);
  for (std::size_t k = 0; k < size; ++k) b[k] = grid.is_boundary(k) ? 0.0 : h[k];

  PoissonSolveResult result;
  result.residual_scale = std::max(1.0, kernels::max_abs(b));
  const double target = tol * result.residual_scale;
  const int cap = poisson_iteration_cap(grid.interior_count(), tol);

  std::vector<double> x(size, 0.0), r(b), z(size), p(size), ap(size);
  auto precondition = [&] {
    for (std::size_t k = 0; k < size; ++k) z[k] = grid.is_boundary(k) ? 0.0 : r[k] / diag;
  };

  double rnorm = kernels::max_abs(r);
  int it = 0;
  if (rnorm > target) {
    precondition();
    p = z;
    double rz = kernels::dot(r, z);
    while (true) {
      if (it >= cap) {
        throw SolverError("solve_poisson: residual " + std::to_string(rnorm) + " above " + std::to_string(target) +
                          " after " + std::to_string(cap) + " iterations");
      }
      kernels::neg_laplacian(grid, p, ap);
      const double pap = kernels::dot(p, ap);
      if (!(pap > 0.0)) break;
      const double alpha = rz / pap;
      kernels::axpy(alpha, p, x);
      kernels::axpy(-alpha, ap, r);
      ++it;
      rnorm = kernels::max_abs(r);
      if (rnorm <= target) {
        // The recursive residual drifts; confirm against the true one.
        rnorm = interior_residual(grid, x, b, r);
        if (rnorm <= target) break;
        precondition();
        p = z;
        rz = kernels::dot(r, z);
        continue;
      }
      precondition();
      const double rz_next = kernels::dot(r, z);
      kernels::xpby(z, rz_next / rz, p);
      rz = rz_next;
    }
  }

  result.solution = ScalarField(grid, std::move(x));
  std::vector<double> scratch(size);
  result.residual_norm = interior_residual(grid, result.solution.values(), b, scratch);
  if (!(result.residual_norm <= target)) {
    throw SolverError("solve_poisson: final residual " + std::to_string(result.residual_norm) + " above tolerance");
  }
  result.iterations = it;
  const double h_l1 = lp_norm(h, 1.0);
  result.grad_l1_ratio = h_l1 > 0.0 ? lp_norm(gradient(result.solution).magnitude(), 1.0) / h_l1 : 0.0;
  return result;
}

ScalarField sample_function(const GridSpec& grid, const NodalFunction& fn) {
  ScalarField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.coords(k);
    out[k] = fn(x[0], x[1]);
  }
  return out;
}

ConvergenceStudy convergence_order(const ManufacturedPair& pair, int dim, const std::vector<int>& sizes,
                                   double tol) {
  if (sizes.size() < 3) throw DomainError("convergence_order: need at least three grid sizes");
  ConvergenceStudy study;
  for (int n : sizes) {
    const GridSpec grid = build_grid(dim, n);
    const ScalarField source = sample_function(grid, pair.source);
    const ScalarField exact = sample_function(grid, pair.exact);
    const ScalarField z = solve_poisson(source, tol).solution;
    study.spacings.push_back(grid.spacing());
    study.errors.push_back((z - exact).max_abs());
  }
  const bool positive = std::all_of(study.errors.begin(), study.errors.end(), [](double e) { return e > 0.0; });
  if (!positive) {
    study.order = std::numeric_limits<double>::quiet_NaN();
    return study;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto count = static_cast<double>(sizes.size());
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    const double lx = std::log(study.spacings[k]);
    const double ly = std::log(study.errors[k]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  study.order = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  return study;
}

}  // namespace gradsys
