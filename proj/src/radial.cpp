#include "gradsys/radial.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gradsys/errors.hpp"

namespace gradsys {

namespace {

struct Evaluator {
  double r;
  RadialJet operator()(const PowerPiece& p) const {
    const double a = p.a;
    if (a == 0.0) return {p.c, 0.0, 0.0, 0.0};
    const double base = p.c * std::pow(r, a - 3.0);
    return {base * r * r * r, a * base * r * r, a * (a - 1.0) * base * r, a * (a - 1.0) * (a - 2.0) * base};
  }
  RadialJet operator()(const OneMinusPiece& p) const {
    const double s = 1.0 - r, g = p.gamma;
    return {std::pow(s, g), -g * std::pow(s, g - 1.0), g * (g - 1.0) * std::pow(s, g - 2.0),
            -g * (g - 1.0) * (g - 2.0) * std::pow(s, g - 3.0)};
  }
  RadialJet operator()(const QuinticPiece& p) const {
    const double h = p.r1 - p.r0;
    const double t = (r - p.r0) / h;
    const auto& c = p.coeffs;
    const double v = c[0] + t * (c[1] + t * (c[2] + t * (c[3] + t * (c[4] + t * c[5]))));
    const double d1 = c[1] + t * (2 * c[2] + t * (3 * c[3] + t * (4 * c[4] + t * 5 * c[5])));
    const double d2 = 2 * c[2] + t * (6 * c[3] + t * (12 * c[4] + t * 20 * c[5]));
    const double d3 = 6 * c[3] + t * (24 * c[4] + t * 60 * c[5]);
    return {v, d1 / h, d2 / (h * h), d3 / (h * h * h)};
  }
};

double relative_gap(double a, double b) { return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)}); }

}  // namespace

RadialJet evaluate(const PieceForm& form, double r) { return std::visit(Evaluator{r}, form); }

QuinticPiece hermite_bridge(double r0, const RadialJet& left, double r1, const RadialJet& right) {
  if (!(r1 > r0)) throw DomainError("hermite_bridge: need r1 > r0");
  const double h = r1 - r0;
  QuinticPiece q{r0, r1, {}};
  auto& c = q.coeffs;
  c[0] = left.d0;
  c[1] = left.d1 * h;
  c[2] = left.d2 * h * h / 2.0;
  const double a = right.d0 - c[0] - c[1] - c[2];
  const double b = right.d1 * h - c[1] - 2.0 * c[2];
  const double e = right.d2 * h * h - 2.0 * c[2];
  c[3] = 10.0 * a - 4.0 * b + e / 2.0;
  c[4] = -15.0 * a + 7.0 * b - e;
  c[5] = 6.0 * a - 3.0 * b + e / 2.0;
  return q;
}

RadialProfile::RadialProfile(std::vector<Piece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw DomainError("RadialProfile: no pieces");
  if (pieces_.front().lo != 0.0 || pieces_.back().hi != 1.0) {
    throw DomainError("RadialProfile: pieces must cover (0, 1]");
  }
  for (std::size_t k = 0; k < pieces_.size(); ++k) {
    if (!(pieces_[k].hi > pieces_[k].lo)) throw DomainError("RadialProfile: empty piece");
    if (k > 0 && pieces_[k].lo != pieces_[k - 1].hi) throw DomainError("RadialProfile: pieces not contiguous");
  }
}

RadialProfile RadialProfile::single(const PieceForm& form) { return RadialProfile({{0.0, 1.0, form}}); }

std::vector<double> RadialProfile::junctions() const {
  std::vector<double> out;
  for (std::size_t k = 1; k < pieces_.size(); ++k) out.push_back(pieces_[k].lo);
  return out;
}

RadialJet RadialProfile::jet(double r) const {
  if (!(r > 0.0 && r <= 1.0)) throw DomainError("RadialProfile: radius outside (0, 1]");
  for (const auto& piece : pieces_) {
    if (r <= piece.hi) return evaluate(piece.form, r);
  }
  return evaluate(pieces_.back().form, r);
}

double RadialProfile::max_junction_jump() const {
  double worst = 0.0;
  for (std::size_t k = 1; k < pieces_.size(); ++k) {
    const double r = pieces_[k].lo;
    const RadialJet a = evaluate(pieces_[k - 1].form, r), b = evaluate(pieces_[k].form, r);
    worst = std::max({worst, relative_gap(a.d0, b.d0), relative_gap(a.d1, b.d1), relative_gap(a.d2, b.d2)});
  }
  return worst;
}

double radial_laplacian(const RadialProfile& profile, int n_dim, double r) {
  if (!(r > 0.0)) throw DomainError("radial_laplacian: need r > 0");
  const RadialJet j = profile.jet(r);
  return j.d2 + (n_dim - 1) * j.d1 / r;
}

double radial_laplacian_derivative(const RadialProfile& profile, int n_dim, double r) {
  if (!(r > 0.0)) throw DomainError("radial_laplacian_derivative: need r > 0");
  const RadialJet j = profile.jet(r);
  return j.d3 + (n_dim - 1) * (j.d2 / r - j.d1 / (r * r));
}

double unit_sphere_area(int n_dim) {
  if (n_dim < 1) throw DomainError("unit_sphere_area: need N >= 1");
  // Gamma(N/2) from Gamma(1) = 1 or Gamma(1/2) = sqrt(pi).
  double gamma = n_dim % 2 == 0 ? 1.0 : std::sqrt(std::numbers::pi);
  for (double x = n_dim % 2 == 0 ? 1.0 : 0.5; x + 0.5 < n_dim / 2.0; x += 1.0) gamma *= x;
  return 2.0 * std::pow(std::numbers::pi, n_dim / 2.0) / gamma;
}

namespace {

class Simpson {
 public:
  Simpson(const std::function<double(double)>& f, double lo, double hi) : f_(f), lo_(lo), hi_(hi) {}

  double integrate(double a, double b, double tol) {
    const double fa = eval(a), fb = eval(b), m = 0.5 * (a + b), fm = eval(m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return refine(a, b, fa, fm, fb, whole, tol * std::abs(whole) + 1e-300, kMaxDepth);
  }

 private:
  static constexpr int kMaxDepth = 48;

  // Endpoint samples that are 0 * inf limits are taken just inside.
  double eval(double r) const {
    double v = f_(r);
    if (std::isfinite(v)) return v;
    const double nudge = 1e-12 * (hi_ - lo_);
    if (r <= lo_) v = f_(lo_ + nudge);
    else if (r >= hi_) v = f_(hi_ - nudge);
    if (!std::isfinite(v)) throw QuadratureError("radial_integrate: integrand not finite at r = " + std::to_string(r));
    return v;
  }

  double refine(double a, double b, double fa, double fm, double fb, double whole, double eps, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = eval(lm), frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    return refine(a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
           refine(m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
  }

  const std::function<double(double)>& f_;
  double lo_, hi_;
};

constexpr int kPanelCap = 400;

}  // namespace

double radial_integrate(const std::function<double(double)>& integrand, int n_dim, double a, double b, double tol) {
  if (!(a >= 0.0 && b > a)) throw DomainError("radial_integrate: need 0 <= a < b");
  if (!(tol > 0.0)) throw DomainError("radial_integrate: tol must be positive");
  const std::function<double(double)> weighted = [&](double r) { return integrand(r) * std::pow(r, n_dim - 1); };
  Simpson simpson(weighted, a, b);
  const double omega = unit_sphere_area(n_dim);

  double total = 0.0;
  double hi = b;
  double prev = 0.0;
  int decaying = 0;
  for (int k = 0; k < kPanelCap; ++k) {
    const double lo = hi / 2.0;
    if (lo <= a) return omega * (total + simpson.integrate(a, hi, tol));
    const double panel = simpson.integrate(lo, hi, tol);
    total += panel;
    hi = lo;
    if (a > 0.0) continue;
    // a = 0: watch the panel contributions for geometric decay.
    const double ratio = k > 0 && prev != 0.0 ? std::abs(panel / prev) : (panel == 0.0 && k > 0 ? 0.0 : 1.0);
    prev = panel;
    decaying = ratio < 0.999 ? decaying + 1 : 0;
    if (decaying >= 3) {
      const double tail = panel * ratio / (1.0 - ratio);
      if (std::abs(tail) <= tol * std::abs(total) || (panel == 0.0 && total == 0.0 && k > 8)) {
        return omega * (total + tail);
      }
    }
  }
  if (a > 0.0) return omega * (total + simpson.integrate(a, hi, tol));
  throw QuadratureError("radial_integrate: contributions near r = 0 do not decay");
}

}  // namespace gradsys
