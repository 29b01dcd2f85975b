#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gradsys/bilaplacian.hpp"
#include "gradsys/errors.hpp"

using namespace gradsys;
using std::numbers::pi;

TEST_CASE("choose_sigma0 examples") {
  const auto a = choose_sigma0(2.0, 2.0, 8);
  CHECK(a.m0 == 2.0);
  CHECK(a.sigma0 == doctest::Approx(3.0).epsilon(1e-15));
  CHECK_FALSE(a.adjusted);

  const auto b = choose_sigma0(3.0, 2.0, 4);
  CHECK(b.m0 == 3.0);
  CHECK(b.sigma0 == doctest::Approx(4.0 - 0.004).epsilon(1e-15));

  CHECK_THROWS_AS(choose_sigma0(1.2, 2.0, 8), DomainError);
  CHECK_THROWS_AS(choose_sigma0(2.0, 1.0, 8), DomainError);

  const auto c = choose_sigma0(50.0, 2.0, 3);
  CHECK(c.m0 == doctest::Approx(3.0 - 0.003));
}

TEST_CASE("choose_sigma0 lowers m0 when the first pair fails") {
  const auto c = choose_sigma0(3.0, 100.0, 8);
  CHECK(c.adjusted);
  CHECK(c.m0 < 3.0);
  CHECK(c.m0 > 8.0 / (3.0 * 100.0 / 99.0));
  CHECK(check_admissibility(Exponents{100.0, 1.0, c.m0, c.sigma0, 8.0, {}}).subcritical);
}

TEST_CASE("choose_sigma0 always returns an admissible pair") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 500; ++k) {
    const int n = 2 + static_cast<int>(u(rng) * 9);
    const double p = 1.05 + 4.0 * u(rng);
    const double lo = std::max(1.0, n / (3.0 * p / (p - 1.0)));
    const double m = lo + 0.01 + 2.0 * n * u(rng);
    try {
      const auto c = choose_sigma0(m, p, n);
      CHECK(check_admissibility(Exponents{p, 1.0, c.m0, c.sigma0, static_cast<double>(n), {}}).subcritical);
    } catch (const AdmissibilityError&) {
    }
  }
}

TEST_CASE("zero data gives the zero solution") {
  const GridSpec g = build_grid(2, 17);
  const auto r = solve_bilaplacian(ScalarField(g), 0.0, 2.0, thresholds_from(2.0, 1.0));
  CHECK(r.report.verdict == Verdict::Converged);
  CHECK(r.u.max_abs() == 0.0);
  CHECK(r.v.max_abs() == 0.0);
  CHECK(cross_validate(r, ScalarField(g), 0.0, 2.0) == 0.0);
}

TEST_CASE("discrete bi-Laplacian on the eigenfunction and linearity") {
  const GridSpec g = build_grid(2, 65);
  const ScalarField s = sample(g, "sinprod");
  const ScalarField b = apply_discrete_bilaplacian(s);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.is_boundary(k)) err = std::max(err, std::abs(b[k] - 4.0 * std::pow(pi, 4) * s[k]));
  }
  const double h = g.spacing();
  CHECK(err < 4.0 * std::pow(pi, 4) * 2.0 * pi * pi * h * h / 6.0);
  CHECK(apply_discrete_bilaplacian(ScalarField(g)).max_abs() == 0.0);
  CHECK_THROWS_AS(apply_discrete_bilaplacian(sample(g, "one")), DomainError);

  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField x(g), y(g);
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (g.is_boundary(k)) continue;
    x[k] = u(rng);
    y[k] = u(rng);
  }
  const ScalarField lhs = apply_discrete_bilaplacian(2.0 * x + (-3.0) * y);
  const ScalarField rhs = 2.0 * apply_discrete_bilaplacian(x) + (-3.0) * apply_discrete_bilaplacian(y);
  CHECK((lhs - rhs).max_abs() < 1e-9 * lhs.max_abs());
}

TEST_CASE("linear manufactured case") {
  std::vector<double> errors;
  for (int n : {33, 65}) {
    const GridSpec g = build_grid(2, n);
    const ScalarField s = sample(g, "sinprod");
    const auto lin = solve_linear_biharmonic(4.0 * std::pow(pi, 4) * s);
    const double h = g.spacing();
    errors.push_back((lin.u - s).max_abs());
    // Two chained solves each shrink the eigenvalue by pi^2 h^2 / 12.
    CHECK(errors.back() < 1.1 * pi * pi / 6.0 * h * h);
    CHECK((lin.v - 2.0 * pi * pi * s).max_abs() < 2.0 * pi * pi * h * h);
  }
  CHECK(errors[0] / errors[1] == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("chained Poisson solves invert the composed stencil") {
  const GridSpec g = build_grid(2, 33);
  const ScalarField h = sample(g, "gauss:0.2");
  const auto lin = solve_linear_biharmonic(h, 1e-13);
  const ScalarField back = apply_discrete_bilaplacian(lin.u);
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.is_boundary(k)) err = std::max(err, std::abs(back[k] - h[k]));
  }
  CHECK(err < 1e-9);
}

TEST_CASE("nonlinear small-data run converges with Navier boundary values") {
  const GridSpec g = build_grid(2, 33);
  const ScalarField f = sample(g, "one");
  const auto r = solve_bilaplacian(f, 1e-4, 2.0, thresholds_from(2.0, 1.0));
  CHECK(r.report.verdict == Verdict::Converged);
  CHECK(r.u.is_dirichlet());
  CHECK(r.v.is_dirichlet());
  CHECK(r.u.min() >= 0.0);
  CHECK(r.v.min() >= 0.0);
  CHECK(cross_validate(r, f, 1e-4, 2.0) <= 1e-3);
  const ScalarField split = laplacian_apply(r.u) - r.v;
  double err = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (!g.is_boundary(k)) err = std::max(err, std::abs(split[k]));
  }
  CHECK(err <= 1e-9);
}

TEST_CASE("huge lambda reports divergence instead of throwing") {
  const GridSpec g = build_grid(2, 33);
  const auto r = solve_bilaplacian(sample(g, "one"), 1e6, 2.0, thresholds_from(2.0, 1.0));
  CHECK(r.report.verdict == Verdict::Diverged);
}
