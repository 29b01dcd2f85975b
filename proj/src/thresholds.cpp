#include "gradsys/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "gradsys/errors.hpp"
#include "gradsys/exponents.hpp"

namespace gradsys {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kFloorFactor = 1e-12;
// Local exponent below which an integrand is treated as non-integrable;
// dist^-1 is the borderline case.
constexpr double kExponentCutoff = -0.9;

bool blows_up_near_zeros(const ScalarField& phi, const std::vector<double>& integrand) {
  const GridSpec& grid = phi.grid();
  const int n = grid.n();
  const int far = n >= 5 ? 4 : 2;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    if (phi[k] != 0.0) continue;
    const auto [i, j] = grid.axes(k);
    for (int axis = 0; axis < grid.dim(); ++axis) {
      for (int dir : {-1, 1}) {
        const int base = axis == 0 ? i : j;
        if (base + dir * far < 0 || base + dir * far > n - 1) continue;
        auto at = [&](int step) {
          const int s = dir * step;
          return axis == 0 ? grid.index(i + s, j) : grid.index(i, j + s);
        };
        const std::size_t near = at(far / 2), distant = at(far);
        if (phi[near] == 0.0 || phi[distant] == 0.0) continue;
        const double a = integrand[near], b = integrand[distant];
        if (!(a > 0.0 && b > 0.0)) continue;
        if (std::log2(b / a) < kExponentCutoff) return true;
      }
    }
  }
  return false;
}

ScalarField gradient_power(const ScalarField& field, double s) { return abs_power(gradient(field).magnitude(), s); }

void require_test_function(const ScalarField& phi, const char* who, bool nonnegative) {
  if (!phi.is_finite()) throw DomainError(std::string(who) + ": test function is not finite");
  if (!phi.is_dirichlet()) throw DomainError(std::string(who) + ": test function must vanish on the boundary");
  if (nonnegative && phi.min() < 0.0) throw DomainError(std::string(who) + ": test function has a negative node");
  if (phi.max_abs() == 0.0) throw DomainError(std::string(who) + ": test function is identically zero");
}

}  // namespace

double singular_integral(const ScalarField& phi, const ScalarField& numer, double power) {
  const double floor = kFloorFactor * phi.max_abs();
  std::vector<double> integrand(phi.size(), 0.0);
  for (std::size_t k = 0; k < phi.size(); ++k) {
    if (phi[k] == 0.0) continue;
    integrand[k] = numer[k] * std::pow(std::max(std::abs(phi[k]), floor), power);
  }
  if (blows_up_near_zeros(phi, integrand)) return kInf;
  const double total = integrate(ScalarField(phi.grid(), std::move(integrand)));
  if (!std::isfinite(total) || total > kDivergenceCeiling) return kInf;
  return total;
}

double functional_F(const ScalarField& phi, double p, double q) {
  if (!(p > 1.0 && q > 1.0)) throw DomainError("functional_F: need p > 1 and q > 1");
  require_test_function(phi, "functional_F", true);
  const double pc = holder_conjugate(p), qc = holder_conjugate(q);
  const double grad_term = singular_integral(phi, gradient_power(phi, pc), 1.0 - pc);
  const double lap_term = singular_integral(phi, abs_power(laplacian_apply(phi), qc), 1.0 - qc);
  return young_constant(p) * grad_term + young_constant(q) * lap_term;
}

double functional_G(const ScalarField& varphi, double p, double tol) {
  if (!(p > 1.0)) throw DomainError("functional_G: need p > 1");
  require_test_function(varphi, "functional_G", true);
  const double pc = holder_conjugate(p);
  const ScalarField phi = solve_poisson(varphi, tol).solution;
  return young_constant(p) * singular_integral(phi, gradient_power(varphi, pc), 1.0 - pc);
}

double baras_pierre_gap(const ScalarField& h, const ScalarField& phi, double r) {
  require_test_function(phi, "baras_pierre_gap", true);
  if (!(h.grid() == phi.grid())) throw DomainError("baras_pierre_gap: grid mismatch");
  const double k = k_of_r(r);
  const double rc = holder_conjugate(r);
  return k * singular_integral(phi, abs_power(laplacian_apply(phi), rc), 1.0 - rc) - integrate_product(h, phi);
}

double functional_Q(const ScalarField& phi, double p) {
  if (!(p > 1.0)) throw DomainError("functional_Q: need p > 1");
  require_test_function(phi, "functional_Q", false);
  const double pc = holder_conjugate(p);
  const ScalarField lap = laplacian_apply(phi);
  ScalarField psi(phi.grid());
  for (std::size_t k = 0; k < psi.size(); ++k) {
    const double a = std::abs(phi[k]);
    if (a == 0.0) continue;
    psi[k] = std::pow(a, pc - 2.0) * phi[k] * lap[k];
  }
  return singular_integral(phi, gradient_power(psi, pc), -p / ((p - 1.0) * (p - 1.0)));
}

double q_ratio(const ScalarField& f, const ScalarField& phi, double p) {
  const double num = functional_Q(phi, p);
  const double den = integrate_product(f, abs_power(phi, holder_conjugate(p)));
  if (!(den > 0.0)) throw DomainError("q_ratio: int f |phi|^{p'} must be positive");
  return num / den;
}

void CandidateFamily::add(std::string id, ScalarField member) {
  require_test_function(member, "CandidateFamily", true);
  if (!(integrate(member) > 0.0)) throw DomainError("CandidateFamily: member '" + id + "' has no interior mass");
  if (!members.empty() && !(member.grid() == members.front().grid())) {
    throw DomainError("CandidateFamily: members live on different grids");
  }
  ids.push_back(std::move(id));
  members.push_back(std::move(member));
}

CandidateFamily family_from_descriptors(const GridSpec& grid, const std::vector<std::string>& descriptors) {
  CandidateFamily family;
  for (const auto& d : descriptors) family.add(d, sample(grid, d));
  return family;
}

CandidateFamily default_family(const GridSpec& grid) {
  return family_from_descriptors(grid, {"sinprod_pow:2", "sinprod_pow:3", "sinprod_pow:4", "sinprod_pow:6", "bump"});
}

namespace {

template <typename Value, typename Denominator>
ThresholdBound minimize(const CandidateFamily& family, const std::string& name, Value value, Denominator denominator,
                        const char* who) {
  if (family.size() == 0) throw DomainError(std::string(who) + ": empty family");
  ThresholdBound out;
  out.value = kInf;
  bool normalizable = false;
  for (std::size_t k = 0; k < family.size(); ++k) {
    const double den = denominator(family.members[k]);
    ThresholdRow row{name, family.ids[k], 0.0, den, kInf};
    if (den > 0.0) {
      normalizable = true;
      row.value = value(family.members[k]);
      row.ratio = row.value / den;
      if (out.best_member.empty() || row.ratio < out.value) {
        out.value = row.ratio;
        out.best_member = row.member;
      }
    } else {
      row.value = std::numeric_limits<double>::quiet_NaN();
    }
    out.rows.push_back(row);
  }
  if (!normalizable) throw DomainError(std::string(who) + ": no member has a positive normalization integral");
  return out;
}

void require_same_grid(const ScalarField& data, const CandidateFamily& family, const char* who) {
  if (family.size() > 0 && !(data.grid() == family.members.front().grid())) {
    throw DomainError(std::string(who) + ": data and family live on different grids");
  }
}

}  // namespace

ThresholdBound alpha_star_upper(const ScalarField& g, const CandidateFamily& family, double p, double q) {
  require_same_grid(g, family, "alpha_star_upper");
  return minimize(
      family, "F_alpha", [&](const ScalarField& phi) { return functional_F(phi, p, q); },
      [&](const ScalarField& phi) { return integrate_product(g, phi); }, "alpha_star_upper");
}

ThresholdBound lambda_star_upper(const ScalarField& f, const CandidateFamily& family, double p, double q) {
  require_same_grid(f, family, "lambda_star_upper");
  return minimize(
      family, "F_lambda", [&](const ScalarField& phi) { return functional_F(phi, p, q); },
      [&](const ScalarField& phi) { return integrate_product(f, phi); }, "lambda_star_upper");
}

ThresholdBound q1_threshold_upper(const ScalarField& data, const CandidateFamily& family, double p,
                                  ThresholdKind which, double tol) {
  require_same_grid(data, family, "q1_threshold_upper");
  const bool alpha = which == ThresholdKind::Alpha;
  return minimize(
      family, alpha ? "G_alpha" : "G_lambda", [&](const ScalarField& varphi) { return functional_G(varphi, p, tol); },
      [&](const ScalarField& varphi) {
        if (alpha) return integrate_product(data, varphi);
        return integrate_product(data, solve_poisson(varphi, tol).solution);
      },
      "q1_threshold_upper");
}

ThresholdBound lambda_capacity_upper(const ScalarField& f, const CandidateFamily& family, double p) {
  require_same_grid(f, family, "lambda_capacity_upper");
  const double pc = holder_conjugate(p);
  return minimize(
      family, "Q", [&](const ScalarField& phi) { return functional_Q(phi, p); },
      [&](const ScalarField& phi) { return integrate_product(f, abs_power(phi, pc)); }, "lambda_capacity_upper");
}

void write_threshold_csv(std::ostream& os, const std::vector<ThresholdRow>& rows) {
  const auto old_precision = os.precision(17);
  os << "functional,member,value,denominator,ratio\n";
  for (const auto& r : rows) {
    os << r.functional << ',' << r.member << ',' << r.value << ',' << r.denominator << ',' << r.ratio << '\n';
  }
  os.precision(old_precision);
}

// ---------------------------------------------------------------------------

double WitnessParams::p_conj() const { return holder_conjugate(p); }

double WitnessParams::theta() const { return (n_dim - (3.0 * p_conj() + eps)) / p_conj(); }

Witness build_witness(const WitnessParams& wp) {
  if (!(wp.p > 1.0)) throw DomainError("build_witness: need p > 1");
  const double pc = wp.p_conj();
  if (!(wp.n_dim > 3.0 * pc)) {
    throw DomainError("build_witness: need N > 3p' (N = " + std::to_string(wp.n_dim) +
                      ", 3p' = " + std::to_string(3.0 * pc) + ")");
  }
  if (!(wp.eps > 0.0)) throw DomainError("build_witness: need eps > 0");
  if (!(wp.theta() > 0.0)) throw DomainError("build_witness: need eps < N - 3p' so that theta > 0");
  if (!(wp.gamma > (3.0 * pc - 1.0) / pc)) throw DomainError("build_witness: need gamma > (3p'-1)/p'");

  Witness w;
  w.theta = wp.theta();
  w.f_exponent = 3.0 * pc + wp.eps;
  w.m_max = wp.n_dim / (3.0 * pc);
  const PowerPiece inner{1.0, -w.theta};
  const OneMinusPiece outer{wp.gamma};
  const double r0 = 0.25, r1 = 0.5;
  const QuinticPiece bridge = hermite_bridge(r0, evaluate(inner, r0), r1, evaluate(outer, r1));
  w.phi = RadialProfile({{0.0, r0, inner}, {r0, r1, bridge}, {r1, 1.0, outer}});
  w.f = RadialProfile::single(PowerPiece{1.0, -w.f_exponent});
  for (int k = 0; k <= 256; ++k) {
    if (!(evaluate(bridge, r0 + (r1 - r0) * k / 256.0).d0 > 0.0)) {
      throw DomainError("build_witness: the bridge between the outer pieces is not positive");
    }
  }
  return w;
}

namespace {

// Integrate fn(jet of the piece, r) over cutoff < r < 1 piece by piece, so
// third derivatives are never sampled across a junction.
double integrate_pieces(const RadialProfile& profile, int n_dim, double cutoff, double tol,
                        const std::function<double(const RadialJet&, double)>& fn) {
  double total = 0.0;
  for (const auto& piece : profile.pieces()) {
    const double lo = std::max(piece.lo, cutoff);
    if (!(piece.hi > lo)) continue;
    const auto form = piece.form;
    total += radial_integrate([&](double r) { return fn(evaluate(form, r), r); }, n_dim, lo, piece.hi, tol);
  }
  return total;
}

}  // namespace

double radial_q_numerator(const RadialProfile& phi, double p, int n_dim, double cutoff, double tol) {
  if (!(p > 1.0)) throw DomainError("radial_q_numerator: need p > 1");
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw DomainError("radial_q_numerator: cutoff outside [0, 1)");
  const double pc = holder_conjugate(p);
  const double weight_power = -p / ((p - 1.0) * (p - 1.0));
  const double result = integrate_pieces(phi, n_dim, cutoff, tol, [&](const RadialJet& j, double r) {
    const double a = std::abs(j.d0);
    const double lap = j.d2 + (n_dim - 1) * j.d1 / r;
    const double dlap = j.d3 + (n_dim - 1) * (j.d2 / r - j.d1 / (r * r));
    const double grad_psi = (pc - 1.0) * std::pow(a, pc - 2.0) * j.d1 * (-lap) + std::pow(a, pc - 2.0) * j.d0 * (-dlap);
    return std::pow(std::abs(grad_psi), pc) * std::pow(a, weight_power);
  });
  return result > kDivergenceCeiling ? kInf : result;
}

double radial_q_denominator(const RadialProfile& f, const RadialProfile& phi, double p, int n_dim, double cutoff,
                            double tol) {
  if (!(cutoff >= 0.0 && cutoff < 1.0)) throw DomainError("radial_q_denominator: cutoff outside [0, 1)");
  const double pc = holder_conjugate(p);
  return integrate_pieces(phi, n_dim, cutoff, tol, [&](const RadialJet& j, double r) {
    return f.value(r) * std::pow(std::abs(j.d0), pc);
  });
}

WitnessStudy witness_divergence_study(const WitnessParams& wp, const std::vector<double>& cutoffs, double tol) {
  if (cutoffs.empty()) throw DomainError("witness_divergence_study: no cutoffs");
  for (std::size_t k = 0; k < cutoffs.size(); ++k) {
    if (!(cutoffs[k] > 0.0 && cutoffs[k] < 1.0)) throw DomainError("witness_divergence_study: cutoff outside (0, 1)");
    if (k > 0 && !(cutoffs[k] < cutoffs[k - 1])) {
      throw DomainError("witness_divergence_study: cutoffs must decrease strictly");
    }
  }
  const Witness w = build_witness(wp);
  WitnessStudy study;
  for (double delta : cutoffs) {
    const double num = radial_q_numerator(w.phi, wp.p, wp.n_dim, delta, tol);
    const double den = radial_q_denominator(w.f, w.phi, wp.p, wp.n_dim, delta, tol);
    study.cutoffs.push_back(delta);
    study.numerators.push_back(num);
    study.denominators.push_back(den);
    study.ratios.push_back(num / den);
  }
  return study;
}

}  // namespace gradsys
