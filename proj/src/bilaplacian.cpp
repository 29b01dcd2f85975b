#include "gradsys/bilaplacian.hpp"

#include <algorithm>
#include <cmath>

#include "gradsys/errors.hpp"
#include "gradsys/exponents.hpp"

namespace gradsys {

namespace {

double sigma0_rule(double m0, double p, int n_dim, double eps) {
  return m0 >= n_dim / 2.0 ? n_dim - eps : 3.0 * p * m0 / (p + 2.0);
}

bool subcritical_with_q1(double m0, double sigma0, double p, int n_dim) {
  return check_admissibility(Exponents{p, 1.0, m0, sigma0, static_cast<double>(n_dim), {}}).subcritical;
}

}  // namespace

Sigma0Choice choose_sigma0(double m, double p, int n_dim) {
  if (!(p > 1.0)) throw DomainError("choose_sigma0: need p > 1");
  if (n_dim < 1) throw DomainError("choose_sigma0: need N >= 1");
  const double floor = n_dim / (3.0 * holder_conjugate(p));
  if (!(m > std::max(1.0, floor))) {
    throw DomainError("choose_sigma0: need m > max(1, N/(3p')) = " + std::to_string(std::max(1.0, floor)));
  }
  const double eps = 1e-3 * n_dim;
  Sigma0Choice c;
  c.m0 = std::min(m, n_dim - eps);
  c.sigma0 = sigma0_rule(c.m0, p, n_dim, eps);
  if (subcritical_with_q1(c.m0, c.sigma0, p, n_dim)) return c;

  // Walk m0 down toward max(1, N/(3p')) and keep the first value that passes.
  const double lo = std::max(1.0, floor);
  const int steps = 1000;
  for (int k = 1; k < steps; ++k) {
    const double m0 = c.m0 - (c.m0 - lo) * k / steps;
    const double sigma0 = sigma0_rule(m0, p, n_dim, eps);
    if (subcritical_with_q1(m0, sigma0, p, n_dim)) return {m0, sigma0, true};
  }
  throw AdmissibilityError("choose_sigma0: no m0 in (" + std::to_string(lo) + ", " + std::to_string(c.m0) +
                           "] gives an admissible pair with q = 1");
}

BiharmonicResult solve_bilaplacian(const ScalarField& f, double lambda, double p, const ThresholdConstants& t,
                                   double tol, const BilaplacianOptions& options) {
  BiharmonicResult out;
  out.sigma0 = choose_sigma0(options.m, p, options.n_dim);

  ProblemData d;
  d.f = f;
  d.g = ScalarField(f.grid());
  d.lambda = lambda;
  d.alpha = 0.0;
  d.exponents = Exponents{p, 1.0, out.sigma0.m0, out.sigma0.sigma0, static_cast<double>(options.n_dim), {}};
  choose_r(d.exponents);
  d.options.tol = tol;
  d.options.max_iter = options.max_iter;
  d.options.poisson_tol = options.poisson_tol;

  FixedPointResult fp = iterate_to_fixed_point(d, t);
  out.report = std::move(fp.report);
  out.v = std::move(fp.v);
  out.u = out.report.verdict == Verdict::Converged ? solve_poisson(out.v, options.poisson_tol).solution
                                                    : std::move(fp.u);
  return out;
}

ScalarField apply_discrete_bilaplacian(const ScalarField& u) {
  if (!u.is_dirichlet()) throw DomainError("apply_discrete_bilaplacian: u must vanish on the boundary");
  ScalarField w = laplacian_apply(u);
  const GridSpec& grid = u.grid();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary(k)) w[k] = 0.0;
  }
  return laplacian_apply(w);
}

LinearBiharmonic solve_linear_biharmonic(const ScalarField& h, double tol) {
  LinearBiharmonic out;
  out.v = solve_poisson(h, tol).solution;
  out.u = solve_poisson(out.v, tol).solution;
  return out;
}

double cross_validate(const BiharmonicResult& result, const ScalarField& f, double lambda, double p) {
  const ScalarField& u = result.u;
  if (!(u.grid() == f.grid())) throw DomainError("cross_validate: grid mismatch");
  const ScalarField lhs = apply_discrete_bilaplacian(u);
  const ScalarField gp = abs_power(gradient(u).magnitude(), p);
  const GridSpec& grid = u.grid();
  ScalarField defect(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (grid.is_boundary(k)) continue;
    defect[k] = std::abs(lhs[k] - gp[k] - lambda * f[k]);
  }
  return integrate(defect);
}

}  // namespace gradsys
