#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "gradsys/errors.hpp"
#include "gradsys/schauder.hpp"

using namespace gradsys;
using std::numbers::pi;

namespace {

ProblemData make_data(const GridSpec& g, double lambda, double alpha, double p = 2.0, double q = 2.0) {
  ProblemData d;
  d.f = sample(g, "one");
  d.g = sample(g, "one");
  d.lambda = lambda;
  d.alpha = alpha;
  d.exponents = Exponents{p, q, 2.0, 2.0, 2.0, {}};
  choose_r(d.exponents);
  return d;
}

// Maximize upsilon on [0, s0] by repeated zooming grid search.
double grid_max(double pq, double c, double s0) {
  long double lo = 0.0L, hi = s0, best = 0.0L;
  for (int round = 0; round < 12; ++round) {
    const int points = 2000;
    long double best_value = -1.0L;
    for (int k = 0; k <= points; ++k) {
      const long double s = lo + (hi - lo) * k / points;
      const long double value = std::pow(s, 1.0L / pq) - c * s;
      if (value > best_value) {
        best_value = value;
        best = s;
      }
    }
    const long double step = (hi - lo) / points;
    lo = std::max(0.0L, best - 2 * step);
    hi = best + 2 * step;
  }
  return static_cast<double>(best);
}

}  // namespace

TEST_CASE("upsilon examples") {
  CHECK(upsilon(0.0, 2.0, 1.0) == 0.0);
  CHECK(upsilon(1.0, 2.0, 1.0) == 0.0);
  CHECK(upsilon(0.25, 2.0, 1.0) == doctest::Approx(0.25));
  CHECK_THROWS_AS(upsilon(1.0, 1.0, 1.0), DomainError);
}

TEST_CASE("thresholds_from closed forms") {
  const auto a = thresholds_from(2.0, 1.0);
  CHECK(a.ell == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.lambda_star == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(a.s_zero == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a.e_radius() == doctest::Approx(0.5));
  const auto b = thresholds_from(2.0, 2.0);
  CHECK(b.ell == doctest::Approx(1.0 / 16.0).epsilon(1e-15));
  CHECK(b.lambda_star == doctest::Approx(1.0 / 8.0).epsilon(1e-15));
  CHECK(b.s_zero == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(grid_max(2.0, 2.0, b.s_zero) == doctest::Approx(b.ell).epsilon(1e-8));
  CHECK_THROWS_AS(thresholds_from(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(thresholds_from(2.0, 0.0), DomainError);
}

TEST_CASE("thresholds_from agrees with grid search on random parameters") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> upq(1.0, 5.0), uc(0.1, 10.0);
  for (int k = 0; k < 100; ++k) {
    double pq = upq(rng);
    if (pq == 1.0) pq = 1.5;
    const double c = uc(rng);
    const auto t = thresholds_from(pq, c);
    CHECK(t.ell > 0.0);
    CHECK(t.ell < t.s_zero);
    CHECK(t.lambda_star > 0.0);
    CHECK(c * (t.ell + t.lambda_star / c) == doctest::Approx(std::pow(t.ell, 1.0 / pq)).epsilon(1e-12));
  }
}

TEST_CASE("pi_membership examples") {
  const GridSpec g = build_grid(2, 17);
  const auto t = thresholds_from(4.0, 1.0);
  ProblemData d = make_data(g, 0.0, 0.0);
  CHECK(pi_membership(d, t).member);

  const double norm_f = lp_norm(d.f, d.exponents.m);
  d.lambda = t.lambda_star / t.c_tilde / norm_f;
  const auto edge = pi_membership(d, t);
  CHECK(edge.data_term == doctest::Approx(edge.bound).epsilon(1e-14));
  CHECK(edge.member);

  d.lambda *= 2.0;
  CHECK_FALSE(pi_membership(d, t).member);

  d.lambda = 0.0;
  d.alpha = 0.1;
  d.g = 2.0 * d.g;
  const auto both = pi_membership(d, t);
  CHECK(both.data_term == doctest::Approx(0.01 * 4.0));
  CHECK(both.data_term_unpowered == doctest::Approx(0.01 * 2.0));
}

TEST_CASE("map_T examples") {
  const GridSpec g = build_grid(2, 33);
  ProblemData d = make_data(g, 0.0, 0.0);
  const auto zero = map_T(ScalarField(g), d);
  CHECK(zero.u.max_abs() == 0.0);
  CHECK(zero.v.max_abs() == 0.0);

  d.lambda = 3.0;
  const auto forced = map_T(ScalarField(g), d);
  CHECK(forced.u.max_abs() == 0.0);
  CHECK((forced.v - 3.0 * solve_poisson(d.f).solution).max_abs() < 1e-9);
}

TEST_CASE("map_T on the eigenfunction with q = 1") {
  auto run = [](int n) {
    const GridSpec g = build_grid(2, n);
    ProblemData d = make_data(g, 0.0, 0.0, 2.0, 1.0);
    return map_T(sample(g, "sinprod"), d);
  };
  const auto fine = run(257);
  auto v_error = [&](const MapResult& coarse) {
    const int n = coarse.v.grid().n(), stride = 256 / (n - 1);
    double err = 0.0;
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i < n; ++i) {
        const double ref = fine.v[fine.v.grid().index(stride * i, stride * j)];
        err = std::max(err, std::abs(coarse.v[coarse.v.grid().index(i, j)] - ref));
      }
    }
    return err;
  };
  const auto c33 = run(33), c65 = run(65);
  const GridSpec& g = c33.u.grid();
  const double h = g.spacing();
  CHECK((c33.u - (1.0 / (2.0 * pi * pi)) * sample(g, "sinprod")).max_abs() < 0.1 * h * h);
  CHECK(v_error(c33) < 8.0 * fine.v.max_abs() * h * h);
  CHECK(v_error(c33) / v_error(c65) > 3.0);
  CHECK(c33.u.min() >= 0.0);
  CHECK(c33.v.min() >= 0.0);
}

TEST_CASE("iteration with zero data converges at the first step") {
  const GridSpec g = build_grid(2, 17);
  const auto r = iterate_to_fixed_point(make_data(g, 0.0, 0.0), thresholds_from(4.0, 1.0));
  CHECK(r.report.verdict == Verdict::Converged);
  CHECK(r.report.trace.size() == 1);
  CHECK(r.u.max_abs() == 0.0);
  CHECK(r.v.max_abs() == 0.0);
  CHECK(r.report.residual_certified);
  CHECK(r.report.in_E_all_iterations);
}

TEST_CASE("small data converges to a nonnegative certified pair") {
  const GridSpec g = build_grid(2, 33);
  const auto r = iterate_to_fixed_point(make_data(g, 1e-4, 1e-4), thresholds_from(4.0, 0.2));
  CHECK(r.report.verdict == Verdict::Converged);
  CHECK(r.report.residual_certified);
  CHECK(r.u.min() >= 0.0);
  CHECK(r.v.min() >= 0.0);
  CHECK(r.u.is_dirichlet());
  CHECK(r.v.is_dirichlet());
  CHECK(r.report.trace.back().rel_change_w11 <= 1e-8L);
}

TEST_CASE("huge lambda diverges with a strictly increasing tail") {
  const GridSpec g = build_grid(2, 33);
  const auto r = iterate_to_fixed_point(make_data(g, 1e6, 0.0), thresholds_from(4.0, 0.2));
  CHECK(r.report.verdict == Verdict::Diverged);
  REQUIRE(r.report.trace.size() >= 5);
  const auto& tr = r.report.trace;
  for (std::size_t k = tr.size() - 4; k < tr.size(); ++k) CHECK(tr[k].grad_v_r > tr[k - 1].grad_v_r);
  CHECK_FALSE(r.report.in_E_all_iterations);
  CHECK(r.u.is_finite());
  CHECK(r.v.is_finite());
}

TEST_CASE("iteration cap yields MaxIterReached") {
  const GridSpec g = build_grid(2, 17);
  ProblemData d = make_data(g, 1e-2, 1e-2);
  d.options.max_iter = 2;
  d.options.tol = 1e-15;
  const auto r = iterate_to_fixed_point(d, thresholds_from(4.0, 0.2));
  CHECK(r.report.verdict == Verdict::MaxIterReached);
  CHECK(r.report.trace.size() == 2);
  CHECK_FALSE(r.report.residual_certified);
}

TEST_CASE("the first two iterates increase from w0 = 0") {
  const GridSpec g = build_grid(2, 33);
  const ProblemData d = make_data(g, 0.5, 0.5);
  const auto first = map_T(ScalarField(g), d);
  const auto second = map_T(first.v, d);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(first.v[k] <= second.v[k]);
}

TEST_CASE("rescaling f against lambda leaves the trace unchanged") {
  const GridSpec g = build_grid(2, 33);
  const auto t = thresholds_from(4.0, 0.2);
  ProblemData a = make_data(g, 1e-3, 1e-3);
  a.f = sample(g, "gauss:0.3");
  ProblemData b = a;
  b.f = 4.0 * a.f;
  b.lambda = a.lambda / 4.0;
  const auto ra = iterate_to_fixed_point(a, t), rb = iterate_to_fixed_point(b, t);
  REQUIRE(ra.report.trace.size() == rb.report.trace.size());
  for (std::size_t k = 0; k < ra.report.trace.size(); ++k) {
    CHECK(static_cast<double>(rb.report.trace[k].grad_v_r) ==
          doctest::Approx(static_cast<double>(ra.report.trace[k].grad_v_r)).epsilon(1e-13));
  }
}

TEST_CASE("weak_residual examples") {
  const GridSpec g = build_grid(2, 33);
  const auto tests = default_test_set(g);
  CHECK(tests.size() == 25);
  for (const auto& phi : tests) CHECK(phi.is_dirichlet());
  CHECK(default_test_set(build_grid(1, 33)).size() == 5);

  ProblemData d = make_data(g, 0.0, 0.0, 2.0, 1.0);
  const auto zero = weak_residual(ScalarField(g), ScalarField(g), d, tests);
  CHECK(zero.res1 == 0.0);
  CHECK(zero.res2 == 0.0);

  auto res1_at = [](int n) {
    const GridSpec grid = build_grid(2, n);
    ProblemData dd = make_data(grid, 0.0, 0.0, 2.0, 1.0);
    const ScalarField v = sample(grid, "sinprod");
    const ScalarField u = (1.0 / (2.0 * pi * pi)) * v;
    return weak_residual(u, v, dd, default_test_set(grid)).res1;
  };
  const double r33 = res1_at(33), r65 = res1_at(65);
  CHECK(r33 < 1e-2);
  CHECK(r33 / r65 > 3.0);
}

TEST_CASE("calibration is deterministic and positive") {
  const GridSpec g = build_grid(2, 17);
  const ProblemData d = make_data(g, 1e-4, 1e-4);
  CalibrationOptions o;
  o.probes = 6;
  const auto a = calibrate_c_tilde(d, o), b = calibrate_c_tilde(d, o);
  CHECK(a.c_tilde == b.c_tilde);
  CHECK(a.c_tilde > 0.0);
  CHECK(a.ratios.size() == 6);
  CHECK(a.rounds >= 1);
  for (double ratio : a.ratios) CHECK(ratio <= a.c_tilde);
}

TEST_CASE("problem validation") {
  const GridSpec g = build_grid(2, 9);
  ProblemData d = make_data(g, 0.0, 0.0);
  d.lambda = -1.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d = make_data(g, 0.0, 0.0);
  d.f[g.index(4, 4)] = -1.0;
  CHECK_THROWS_AS(d.validate(), DomainError);
  d = make_data(g, 0.0, 0.0);
  d.exponents = Exponents{4.0, 2.0, 2.0, 2.0, 3.0, {}};
  CHECK_THROWS_AS(d.validate(), AdmissibilityError);
  CHECK(to_string(Verdict::Diverged) == "Diverged");
}
