#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "gradsys/errors.hpp"
#include "gradsys/grid.hpp"

using namespace gradsys;
using std::numbers::pi;

namespace {

ScalarField from_function(const GridSpec& grid, double (*fn)(double, double)) {
  ScalarField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const auto x = grid.coords(k);
    out[k] = fn(x[0], x[1]);
  }
  return out;
}

ScalarField random_field(const GridSpec& grid, std::mt19937_64& rng, bool dirichlet) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  ScalarField out(grid);
  for (std::size_t k = 0; k < grid.size(); ++k) out[k] = dirichlet && grid.is_boundary(k) ? 0.0 : u(rng);
  return out;
}

}  // namespace

TEST_CASE("build_grid counts nodes and rejects bad sizes") {
  const GridSpec g1 = build_grid(1, 3);
  CHECK(g1.size() == 3);
  CHECK(g1.interior_count() == 1);
  CHECK(g1.coords(1)[0] == 0.5);
  CHECK(g1.coords(2)[0] == 1.0);

  const GridSpec g2 = build_grid(2, 5);
  CHECK(g2.size() == 25);
  CHECK(g2.spacing() == 0.25);
  CHECK(g2.interior_count() == 9);
  int flagged = 0;
  for (auto b : g2.boundary_mask()) flagged += b;
  CHECK(flagged == 16);

  CHECK_THROWS_AS(build_grid(2, 2), DomainError);
  CHECK_THROWS_AS(build_grid(3, 5), DomainError);
}

TEST_CASE("sample evaluates catalog descriptors") {
  const GridSpec g = build_grid(2, 9);
  const ScalarField one = sample(g, "one");
  CHECK(one.min() == 1.0);
  CHECK(one.max() == 1.0);
  CHECK(sample(g, "zero").max_abs() == 0.0);

  const ScalarField s = sample(g, "sinprod");
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coords(k);
    CHECK(s[k] == doctest::Approx(std::sin(pi * x[0]) * std::sin(pi * x[1])).epsilon(1e-14));
  }
  CHECK(s.is_dirichlet());

  const ScalarField line = sample(build_grid(1, 3), "sinprod");
  CHECK(line[0] == 0.0);
  CHECK(line[1] == 1.0);
  CHECK(line[2] == 0.0);

  const ScalarField s4 = sample(g, "sinprod_pow:4");
  CHECK(s4[g.index(4, 4)] == doctest::Approx(1.0));
  CHECK(s4[g.index(2, 4)] == doctest::Approx(std::pow(std::sin(pi / 4), 4)));

  const ScalarField gauss = sample(g, "gauss:0.2");
  CHECK(gauss[g.index(4, 4)] == 1.0);
  CHECK(gauss[g.index(0, 4)] == doctest::Approx(std::exp(-0.5 * 0.25 / 0.04)));

  const ScalarField bump = sample(g, "bump");
  CHECK(bump[g.index(4, 4)] == doctest::Approx(1.0));
  CHECK(bump.is_dirichlet());
  CHECK(bump.min() >= 0.0);

  CHECK_THROWS_AS(sample(g, "nonsense"), DomainError);
  CHECK_THROWS_AS(sample(g, "sinprod_pow"), DomainError);
  CHECK_THROWS_AS(sample(g, "gauss:abc"), DomainError);
}

TEST_CASE("radial powers are clamped near the center unless regularization is off") {
  const GridSpec g = build_grid(2, 5);
  const ScalarField r = sample(g, "radial_pow:-1");
  CHECK(r[g.index(2, 2)] == doctest::Approx(1.0 / (0.5 * g.spacing())));
  CHECK(r[g.index(0, 2)] == doctest::Approx(2.0));
  CHECK_THROWS_AS(sample(g, "radial_pow:-1", SampleOptions{false}), DomainError);
  CHECK_NOTHROW(sample(g, "radial_pow:2", SampleOptions{false}));
}

TEST_CASE("file descriptor reads one value per line") {
  const auto dir = std::filesystem::temp_directory_path() / "gradsys_test_grid";
  std::filesystem::create_directories(dir);
  const auto good = dir / "good.txt";
  {
    std::ofstream out(good);
    for (int k = 0; k < 9; ++k) out << k * 0.5 << '\n';
  }
  const GridSpec g = build_grid(2, 3);
  const ScalarField f = sample(g, "file:" + good.string());
  CHECK(f[g.index(2, 1)] == 2.5);

  const auto bad = dir / "bad.txt";
  {
    std::ofstream out(bad);
    out << "1\n2\nthree\n";
  }
  try {
    sample(g, "file:" + bad.string());
    FAIL("expected an error");
  } catch (const DomainError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  CHECK_THROWS_AS(sample(build_grid(2, 4), "file:" + good.string()), DomainError);
}

TEST_CASE("integrate uses the trapezoid rule") {
  CHECK(integrate(sample(build_grid(2, 17), "one")) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(sample(build_grid(1, 7), "one")) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(integrate(sample(build_grid(2, 9), "zero")) == 0.0);
  const double s = integrate(sample(build_grid(1, 101), "sinprod"));
  CHECK(std::abs(s - 2.0 / pi) < 1e-3);
}

TEST_CASE("lp_norm matches analytic values and is homogeneous and monotone") {
  const GridSpec g = build_grid(2, 17);
  CHECK(lp_norm(sample(g, "one"), 3.5) == doctest::Approx(1.0));
  CHECK(lp_norm(2.0 * sample(g, "one"), 2.0) == doctest::Approx(2.0));
  CHECK(std::abs(lp_norm(sample(build_grid(1, 101), "sinprod"), 2.0) - std::sqrt(0.5)) < 1e-3);
  CHECK_THROWS_AS(lp_norm(sample(g, "one"), 0.5), DomainError);

  std::mt19937_64 rng(7);
  const ScalarField f = random_field(g, rng, false);
  for (double a : {-3.0, 0.25, 7.0}) {
    CHECK(lp_norm(a * f, 2.5) == doctest::Approx(std::abs(a) * lp_norm(f, 2.5)).epsilon(1e-13));
  }
  ScalarField bigger = f;
  for (std::size_t k = 0; k < bigger.size(); ++k) bigger[k] = 1.5 * std::abs(f[k]);
  CHECK(lp_norm(bigger, 3.0) >= lp_norm(f, 3.0));
  CHECK(lp_norm(1e300 * sample(g, "one"), 4.0) == doctest::Approx(1e300));
}

TEST_CASE("gradient is exact on affine fields and second order on smooth ones") {
  const GridSpec g = build_grid(2, 11);
  const VectorField d = gradient(from_function(g, [](double x, double y) { return 2.0 * x - 3.0 * y + 1.0; }));
  for (std::size_t k = 0; k < g.size(); ++k) {
    CHECK(d.component(0)[k] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(d.component(1)[k] == doctest::Approx(-3.0).epsilon(1e-12));
  }
  const VectorField zero = gradient(sample(g, "one"));
  CHECK(zero.magnitude().max_abs() < 1e-12);

  const GridSpec line = build_grid(1, 101);
  const VectorField ds = gradient(sample(line, "sinprod"));
  double err = 0.0;
  for (std::size_t k = 0; k < line.size(); ++k) {
    err = std::max(err, std::abs(ds.component(0)[k] - pi * std::cos(pi * line.coords(k)[0])));
  }
  const double h = line.spacing();
  // Leading one-sided boundary error is h^2 |f'''| / 3.
  CHECK(err < 1.1 * pi * pi * pi / 3.0 * h * h);
}

TEST_CASE("laplacian_apply is exact on quadratics and second order on the eigenfunction") {
  const GridSpec line = build_grid(1, 9);
  const ScalarField lap = laplacian_apply(from_function(line, [](double x, double) { return x * (1.0 - x); }));
  for (std::size_t k = 1; k + 1 < line.size(); ++k) CHECK(lap[k] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(laplacian_apply(sample(line, "zero")).max_abs() == 0.0);

  const GridSpec g = build_grid(2, 9);
  const ScalarField q = from_function(g, [](double x, double y) { return x * x * y * y + 3.0 * x * y - y * y; });
  const ScalarField lq = laplacian_apply(q);
  for (std::size_t k = 0; k < g.size(); ++k) {
    const auto x = g.coords(k);
    const double expected = g.is_boundary(k) ? q[k] : -(2.0 * x[1] * x[1] + 2.0 * x[0] * x[0] - 2.0);
    CHECK(lq[k] == doctest::Approx(expected).epsilon(1e-10));
  }

  const GridSpec fine = build_grid(2, 65);
  const ScalarField s = sample(fine, "sinprod");
  const ScalarField ls = laplacian_apply(s);
  double err = 0.0;
  for (std::size_t k = 0; k < fine.size(); ++k) {
    if (!fine.is_boundary(k)) err = std::max(err, std::abs(ls[k] - 2.0 * pi * pi * s[k]));
  }
  const double h = fine.spacing();
  CHECK(err < 2.0 * pi * pi * h * h);
}

TEST_CASE("gradient and laplacian_apply are linear") {
  const GridSpec g = build_grid(2, 13);
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const ScalarField a = random_field(g, rng, true), b = random_field(g, rng, true);
    const double s = 1.7, t = -0.3;
    const ScalarField combo = s * a + t * b;
    const ScalarField lhs = laplacian_apply(combo);
    const ScalarField rhs = s * laplacian_apply(a) + t * laplacian_apply(b);
    CHECK((lhs - rhs).max_abs() < 1e-12 * (1.0 + lhs.max_abs()));
    const VectorField ga = gradient(a), gb = gradient(b), gc = gradient(combo);
    for (int axis = 0; axis < 2; ++axis) {
      for (std::size_t k = 0; k < g.size(); ++k) {
        CHECK(gc.component(axis)[k] ==
              doctest::Approx(s * ga.component(axis)[k] + t * gb.component(axis)[k]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("quadrature converges at order two under refinement") {
  std::vector<double> hs, errs;
  for (int n : {17, 33, 65, 129}) {
    const GridSpec g = build_grid(2, n);
    const double value = integrate(from_function(g, [](double x, double y) { return std::exp(x + y); }));
    hs.push_back(g.spacing());
    errs.push_back(std::abs(value - (std::numbers::e - 1.0) * (std::numbers::e - 1.0)));
  }
  for (std::size_t k = 1; k < hs.size(); ++k) {
    CHECK(std::log(errs[k - 1] / errs[k]) / std::log(hs[k - 1] / hs[k]) >= 1.95);
  }
}

TEST_CASE("positive_power and abs_power act nodewise") {
  const GridSpec g = build_grid(1, 5);
  ScalarField f(g);
  f[1] = -2.0;
  f[2] = 3.0;
  f[3] = 0.5;
  const ScalarField pp = positive_power(f, 2.0);
  CHECK(pp[1] == 0.0);
  CHECK(pp[2] == 9.0);
  const ScalarField ap = abs_power(f, 3.0);
  CHECK(ap[1] == doctest::Approx(8.0));
  CHECK(ap[3] == doctest::Approx(0.125));
}
