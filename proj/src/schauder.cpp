#include "gradsys/schauder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "gradsys/errors.hpp"

namespace gradsys {

double ThresholdConstants::e_radius() const { return std::pow(ell, 1.0 / pq); }

double upsilon(double s, double pq, double c_tilde) {
  if (!(s >= 0.0 && pq > 1.0 && c_tilde > 0.0)) throw DomainError("upsilon: need s >= 0, pq > 1, C > 0");
  return std::pow(s, 1.0 / pq) - c_tilde * s;
}

ThresholdConstants thresholds_from(double pq, double c_tilde) {
  if (!(pq > 1.0)) throw DomainError("thresholds_from: need pq > 1");
  if (!(c_tilde > 0.0) || !std::isfinite(c_tilde)) throw DomainError("thresholds_from: need C > 0");
  ThresholdConstants t;
  t.pq = pq;
  t.c_tilde = c_tilde;
  const double e = -pq / (pq - 1.0);
  t.ell = std::pow(pq * c_tilde, e);
  t.s_zero = std::pow(c_tilde, e);
  t.lambda_star = std::pow(t.ell, 1.0 / pq) - c_tilde * t.ell;
  const bool ok = t.ell > 0.0 && std::isfinite(t.ell) && t.s_zero > t.ell && std::isfinite(t.s_zero) &&
                  t.lambda_star > 0.0;
  if (!ok) throw DomainError("thresholds_from: constants degenerate for pq close to 1");
  return t;
}

double ProblemData::iteration_exponent() const {
  if (exponents.r_iter) return *exponents.r_iter;
  Exponents copy = exponents;
  return choose_r(copy);
}

void ProblemData::validate() const {
  if (!(f.grid() == g.grid())) throw DomainError("problem data: f and g live on different grids");
  if (f.grid().size() == 0) throw DomainError("problem data: empty grid");
  if (!f.is_finite() || !g.is_finite()) throw DomainError("problem data: f or g is not finite");
  if (f.min() < 0.0 || g.min() < 0.0) throw DomainError("problem data: f and g must be nonnegative");
  if (!(lambda >= 0.0 && alpha >= 0.0) || !std::isfinite(lambda) || !std::isfinite(alpha)) {
    throw DomainError("problem data: lambda and alpha must be finite and nonnegative");
  }
  if (!(exponents.p >= 1.0)) throw DomainError("problem data: need p >= 1");
  require_admissible(exponents);
  if (!(options.tol > 0.0 && options.max_iter > 0 && options.divergence_factor > 0.0 &&
        options.divergence_window > 0 && options.poisson_tol > 0.0)) {
    throw DomainError("problem data: iteration options must be positive");
  }
}

PiMembership pi_membership(const ProblemData& d, const ThresholdConstants& t) {
  const double p = d.exponents.p;
  const double fm = d.lambda > 0.0 ? lp_norm(d.f, d.exponents.m) : 0.0;
  const double gs = d.alpha > 0.0 ? lp_norm(d.g, d.exponents.sigma) : 0.0;
  PiMembership out;
  out.data_term = d.lambda * fm + std::pow(d.alpha, p) * std::pow(gs, p);
  out.bound = t.lambda_star / t.c_tilde;
  // The region is closed; allow a few ulps when data sits on the boundary.
  out.member = out.data_term <= out.bound * (1.0 + 1e-12);
  out.data_term_unpowered = d.lambda * fm + std::pow(d.alpha, p) * gs;
  out.member_unpowered = out.data_term_unpowered <= t.lambda_star * (1.0 + 1e-12);
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Converged: return "Converged";
    case Verdict::Diverged: return "Diverged";
    case Verdict::MaxIterReached: return "MaxIterReached";
  }
  return "unknown";
}

namespace {

using ld = long double;

// value = scale * shape with max|shape| of order one.
struct Scaled {
  ScalarField shape;
  ld scale = 0;
};

Scaled normalized(const ScalarField& field) {
  const double m = field.max_abs();
  if (m == 0.0) return {field, 0};
  return {(1.0 / m) * field, static_cast<ld>(m)};
}

std::optional<ScalarField> materialize(const Scaled& s) {
  const ld peak = s.scale * static_cast<ld>(s.shape.max_abs());
  if (!std::isfinite(static_cast<double>(peak))) return std::nullopt;
  return static_cast<double>(s.scale) * s.shape;
}

double weighted_dot(const GridSpec& grid, std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) sum += grid.quadrature_weight(k) * a[k] * b[k];
  return sum;
}

double grad_dot(const VectorField& a, const VectorField& b) {
  double sum = 0.0;
  for (int axis = 0; axis < a.component_count(); ++axis) {
    sum += weighted_dot(a.grid(), a.component(axis), b.component(axis));
  }
  return sum;
}

struct TestFunction {
  ScalarField phi;
  VectorField grad;
  double energy;
};

std::vector<TestFunction> prepare_tests(const std::vector<ScalarField>& testset) {
  std::vector<TestFunction> out;
  out.reserve(testset.size());
  for (const auto& phi : testset) {
    VectorField grad = gradient(phi);
    const double energy = lp_norm(grad.magnitude(), 2.0);
    out.push_back({phi, std::move(grad), energy});
  }
  return out;
}

// Everything one application of T produces, in scaled form.
struct Step {
  Scaled u;
  Scaled v;
  VectorField grad_u;
  ScalarField grad_u_pow;  // |grad u_shape|^p
  VectorField grad_v;
};

ScalarField combine(ld ca, const ScalarField& a, ld cb, const ScalarField& b) {
  ScalarField out(a.grid());
  const double da = static_cast<double>(ca), db = static_cast<double>(cb);
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = da * a[k] + db * b[k];
  return out;
}

Step apply_map(const Scaled& w, const ProblemData& d, double g_max, double f_max) {
  const double p = d.exponents.p, q = d.exponents.q;
  const double tol = d.options.poisson_tol;
  const GridSpec& grid = d.f.grid();

  const ScalarField wq = positive_power(w.shape, q);
  const ld wq_scale = w.scale == 0 ? 0 : std::pow(w.scale, static_cast<ld>(q));
  const ld su = std::max(wq_scale * static_cast<ld>(wq.max()), static_cast<ld>(d.alpha) * g_max);
  Step s{{ScalarField(grid), su}, {ScalarField(grid), 0}, VectorField(grid), ScalarField(grid), VectorField(grid)};
  if (su > 0) s.u.shape = solve_poisson(combine(wq_scale / su, wq, d.alpha / su, d.g), tol).solution;
  s.grad_u = gradient(s.u.shape);
  s.grad_u_pow = abs_power(s.grad_u.magnitude(), p);

  const ld gp_scale = su == 0 ? 0 : std::pow(su, static_cast<ld>(p));
  const ld sv = std::max(gp_scale * static_cast<ld>(s.grad_u_pow.max()), static_cast<ld>(d.lambda) * f_max);
  s.v.scale = sv;
  if (sv > 0) s.v.shape = solve_poisson(combine(gp_scale / sv, s.grad_u_pow, d.lambda / sv, d.f), tol).solution;
  s.grad_v = gradient(s.v.shape);
  return s;
}

WeakResidual scaled_residual(const std::vector<TestFunction>& tests, const Step& s, const ProblemData& d) {
  const double q = d.exponents.q;
  const ScalarField vq = positive_power(s.v.shape, q);
  const ld vq_scale = s.v.scale == 0 ? 0 : std::pow(s.v.scale, static_cast<ld>(q));
  const ld gp_scale = s.u.scale == 0 ? 0 : std::pow(s.u.scale, static_cast<ld>(d.exponents.p));
  ld res1 = 0, res2 = 0;
  for (const auto& t : tests) {
    const ld norm = 1 + static_cast<ld>(t.energy);
    const ld r1 = s.u.scale * grad_dot(t.grad, s.grad_u) - vq_scale * integrate_product(vq, t.phi) -
                  static_cast<ld>(d.alpha) * integrate_product(d.g, t.phi);
    const ld r2 = s.v.scale * grad_dot(t.grad, s.grad_v) - gp_scale * integrate_product(s.grad_u_pow, t.phi) -
                  static_cast<ld>(d.lambda) * integrate_product(d.f, t.phi);
    res1 = std::max(res1, std::abs(r1) / norm);
    res2 = std::max(res2, std::abs(r2) / norm);
  }
  return {static_cast<double>(res1), static_cast<double>(res2)};
}

// ||a - b||_{W^{1,1}} for scaled fields, factoring out the larger scale.
ld w11_distance(const Scaled& a, const Scaled& b) {
  if (a.scale == 0 && b.scale == 0) return 0;
  if (a.scale >= b.scale) {
    return a.scale * static_cast<ld>(w11_norm(combine(1, a.shape, -(b.scale / a.scale), b.shape)));
  }
  return b.scale * static_cast<ld>(w11_norm(combine(a.scale / b.scale, a.shape, -1, b.shape)));
}

bool finite(const Step& s) {
  return std::isfinite(s.u.scale) && std::isfinite(s.v.scale) && s.u.shape.is_finite() && s.v.shape.is_finite();
}

}  // namespace

MapResult map_T(const ScalarField& w, const ProblemData& d) {
  if (!w.is_finite()) throw DomainError("map_T: w is not finite");
  if (!(w.grid() == d.f.grid())) throw DomainError("map_T: w lives on a different grid");
  d.validate();
  const Step s = apply_map(normalized(w), d, d.g.max(), d.f.max());
  auto u = materialize(s.u), v = materialize(s.v);
  if (!u || !v) throw SolverError("map_T: image exceeds double range");
  return {std::move(*u), std::move(*v)};
}

std::vector<ScalarField> default_test_set(const GridSpec& grid) {
  const int modes = 5;
  std::vector<ScalarField> out;
  const int jmax = grid.dim() == 2 ? modes : 1;
  for (int j = 1; j <= jmax; ++j) {
    for (int i = 1; i <= modes; ++i) {
      ScalarField phi(grid);
      for (std::size_t k = 0; k < grid.size(); ++k) {
        if (grid.is_boundary(k)) continue;
        const auto x = grid.coords(k);
        double value = std::sin(i * std::numbers::pi * x[0]);
        if (grid.dim() == 2) value *= std::sin(j * std::numbers::pi * x[1]);
        phi[k] = value;
      }
      out.push_back(std::move(phi));
    }
  }
  return out;
}

WeakResidual weak_residual(const ScalarField& u, const ScalarField& v, const ProblemData& d,
                           const std::vector<ScalarField>& testset) {
  if (!(u.grid() == v.grid()) || !(u.grid() == d.f.grid())) throw DomainError("weak_residual: grid mismatch");
  Step s{{u, 1}, {v, 1}, gradient(u), ScalarField(u.grid()), gradient(v)};
  s.grad_u_pow = abs_power(s.grad_u.magnitude(), d.exponents.p);
  return scaled_residual(prepare_tests(testset), s, d);
}

FixedPointResult iterate_to_fixed_point(const ProblemData& d, const ThresholdConstants& t,
                                        const std::optional<ScalarField>& w0) {
  d.validate();
  const GridSpec& grid = d.f.grid();
  if (w0 && (!(w0->grid() == grid) || !w0->is_finite())) throw DomainError("iterate_to_fixed_point: bad w0");
  if (w0 && !w0->is_dirichlet()) throw DomainError("iterate_to_fixed_point: w0 must vanish on the boundary");

  const double r = d.iteration_exponent();
  const auto tests = prepare_tests(default_test_set(grid));
  const double g_max = d.g.max(), f_max = d.f.max();
  const IterationOptions& opt = d.options;

  FixedPointResult out{ScalarField(grid), ScalarField(grid), {}};
  IterationReport& rep = out.report;
  rep.r = r;
  rep.e_radius = t.e_radius();
  const ld limit = static_cast<ld>(opt.divergence_factor) * rep.e_radius;

  Scaled w = w0 ? normalized(*w0) : Scaled{ScalarField(grid), 0};
  int streak = 0;
  WeakResidual last_res;
  for (int k = 1; k <= opt.max_iter; ++k) {
    const Step s = apply_map(w, d, g_max, f_max);
    if (!finite(s)) {
      rep.nonfinite = true;
      rep.verdict = Verdict::Diverged;
      break;
    }
    IterationRecord rec;
    rec.iter = k;
    rec.grad_v_r = s.v.scale * static_cast<ld>(lp_norm(s.grad_v.magnitude(), r));
    rec.grad_u_p = s.u.scale * static_cast<ld>(lp_norm(s.grad_u.magnitude(), d.exponents.p));
    const ld base = w.scale * static_cast<ld>(w11_norm(w.shape));
    rec.rel_change_w11 = w11_distance(s.v, w) / std::max(base, static_cast<ld>(1e-30));
    last_res = scaled_residual(tests, s, d);
    rec.res1 = last_res.res1;
    rec.res2 = last_res.res2;
    rec.in_e = rec.grad_v_r <= rep.e_radius;
    rep.in_E_all_iterations = rep.in_E_all_iterations && rec.in_e;
    const ld previous = rep.trace.empty() ? 0 : rep.trace.back().grad_v_r;
    rep.trace.push_back(rec);

    auto u = materialize(s.u), v = materialize(s.v);
    if (u && v) {
      out.u = std::move(*u);
      out.v = std::move(*v);
      rep.returned_iter = k;
    }
    if (!std::isfinite(rec.grad_v_r) || !std::isfinite(rec.rel_change_w11)) {
      rep.nonfinite = true;
      rep.verdict = Verdict::Diverged;
      break;
    }
    if (rec.rel_change_w11 <= opt.tol) {
      rep.verdict = Verdict::Converged;
      rep.residual_certified = last_res.res1 <= opt.residual_tol && last_res.res2 <= opt.residual_tol &&
                               rep.returned_iter == k;
      break;
    }
    if (rec.grad_v_r > limit) {
      streak = (streak > 0 && rec.grad_v_r > previous) ? streak + 1 : 1;
    } else {
      streak = 0;
    }
    if (streak >= opt.divergence_window) {
      rep.verdict = Verdict::Diverged;
      break;
    }
    w = s.v;
  }
  return out;
}

Calibration calibrate_c_tilde(const ProblemData& d, const CalibrationOptions& options) {
  d.validate();
  if (!(options.probes > 0 && options.max_rounds > 0 && options.initial > 0.0)) {
    throw DomainError("calibrate_c_tilde: probes, rounds and initial value must be positive");
  }
  const GridSpec& grid = d.f.grid();
  const double p = d.exponents.p, pq = d.exponents.pq();
  const double r = d.iteration_exponent();
  const double data = d.lambda * lp_norm(d.f, d.exponents.m) +
                      std::pow(d.alpha, p) * std::pow(lp_norm(d.g, d.exponents.sigma), p);

  // Probe shapes are fixed up front; each round only rescales them.
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> coeff(-0.5, 0.5);
  const int modes = 3;
  std::vector<ScalarField> shapes;
  for (int j = 0; j < options.probes; ++j) {
    ScalarField w(grid);
    for (int b = 1; b <= (grid.dim() == 2 ? modes : 1); ++b) {
      for (int a = 1; a <= modes; ++a) {
        const double c = (a == 1 && b == 1) ? 1.0 + coeff(rng) : coeff(rng);
        for (std::size_t k = 0; k < grid.size(); ++k) {
          if (grid.is_boundary(k)) continue;
          const auto x = grid.coords(k);
          double value = std::sin(a * std::numbers::pi * x[0]);
          if (grid.dim() == 2) value *= std::sin(b * std::numbers::pi * x[1]);
          w[k] += c * value;
        }
      }
    }
    const double norm = lp_norm(gradient(w).magnitude(), r);
    shapes.push_back((1.0 / norm) * w);
  }

  Calibration cal;
  cal.c_tilde = options.initial;
  for (int round = 1; round <= options.max_rounds; ++round) {
    const double radius = thresholds_from(pq, cal.c_tilde).e_radius();
    cal.ratios.clear();
    double worst = 0.0;
    for (int j = 0; j < options.probes; ++j) {
      const double frac = static_cast<double>(j + 1) / options.probes;
      const ScalarField w = (frac * radius) * shapes[static_cast<std::size_t>(j)];
      const MapResult image = map_T(w, d);
      const double num = lp_norm(gradient(image.v).magnitude(), r);
      const double den = std::pow(frac * radius, pq) + data;
      const double ratio = num / den;
      cal.ratios.push_back(ratio);
      worst = std::max(worst, ratio);
    }
    cal.rounds = round;
    if (!(worst > 0.0)) throw SolverError("calibrate_c_tilde: all probe images vanish");
    const double change = std::abs(worst - cal.c_tilde) / cal.c_tilde;
    cal.c_tilde = worst;
    if (change <= options.rel_tol) break;
  }
  return cal;
}

}  // namespace gradsys
