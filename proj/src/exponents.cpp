#include "gradsys/exponents.hpp"

#include <cmath>
#include <sstream>

#include "gradsys/errors.hpp"

namespace gradsys {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

double holder_conjugate(double s) {
  if (!(s > 1.0)) throw DomainError("holder_conjugate: need s > 1, got " + num(s));
  return s / (s - 1.0);
}

double sobolev_star(double s, double n_dim) {
  if (!(s < n_dim)) throw DomainError("sobolev_star: need s < N");
  return s * n_dim / (n_dim - s);
}

double young_constant(double s) {
  const double sc = holder_conjugate(s);
  return (s - 1.0) / std::pow(s, sc);
}

double k_of_r(double r) {
  if (!(r > 1.0)) throw DomainError("k_of_r: need r > 1, got " + num(r));
  return young_constant(r);
}

std::string AdmissibilityVerdict::explanation() const {
  if (admissible()) return "admissible";
  return "subcritical branch failed: " + why_subcritical + "; large-m branch failed: " + why_large_m +
         "; large-sigma branch failed: " + why_large_sigma;
}

AdmissibilityVerdict check_admissibility(const Exponents& e) {
  if (!(e.p > 0.0 && e.q > 0.0 && e.m > 0.0 && e.sigma > 0.0 && e.n_dim > 0.0)) {
    throw DomainError("check_admissibility: exponents must be positive");
  }
  if (!(e.pq() > 1.0)) throw DomainError("check_admissibility: need pq > 1, got pq = " + num(e.pq()));
  const double p = e.p, q = e.q, m = e.m, s = e.sigma, n = e.n_dim;
  AdmissibilityVerdict v;

  if (!(m > 1.0 && m < n)) {
    v.why_subcritical = "m = " + num(m) + " not in (1, N = " + num(n) + ")";
  } else if (!(s > 1.0 && s < n)) {
    v.why_subcritical = "sigma = " + num(s) + " not in (1, N = " + num(n) + ")";
  } else if (const double star = s * n / (n - s); !(p * m < star)) {
    v.why_subcritical = "pm = " + num(p * m) + " >= sigma* = " + num(star);
  } else if (const double lhs = q * s / (n + q * s), rhs = m / (n - m); !(lhs < rhs)) {
    v.why_subcritical = "q sigma/(N + q sigma) = " + num(lhs) + " >= m/(N - m) = " + num(rhs);
  } else {
    v.subcritical = true;
  }

  if (!(m >= n)) {
    v.why_large_m = "m = " + num(m) + " < N = " + num(n);
  } else if (const double bound = p * m * n / (n + p * m); !(s > bound)) {
    v.why_large_m = "sigma = " + num(s) + " <= pmN/(N + pm) = " + num(bound);
  } else {
    v.large_m = true;
  }

  if (!(s >= n)) {
    v.why_large_sigma = "sigma = " + num(s) + " < N = " + num(n);
  } else if (const double bound = q * s * n / (n + 2.0 * q * s); !(m > bound)) {
    v.why_large_sigma = "m = " + num(m) + " <= q sigma N/(N + 2 q sigma) = " + num(bound);
  } else {
    v.large_sigma = true;
  }
  return v;
}

void require_admissible(const Exponents& e) {
  const auto v = check_admissibility(e);
  if (!v.admissible()) throw AdmissibilityError(v.explanation());
}

RInterval r_interval(const Exponents& e) {
  const double q = e.q, s = e.sigma, m = e.m, n = e.n_dim;
  RInterval iv;
  iv.lower = std::max(1.0, q * s * n / (n + q * s));
  iv.upper = m < n ? m * n / (n - m) : 10.0 * n;
  return iv;
}

double choose_r(Exponents& e) {
  require_admissible(e);
  const RInterval iv = r_interval(e);
  if (!(iv.lower < iv.upper)) {
    throw AdmissibilityError("choose_r: empty interval (" + num(iv.lower) + ", " + num(iv.upper) + ")");
  }
  const double r = std::sqrt(iv.lower * iv.upper);
  if (!(r > iv.lower && r < iv.upper && r > 1.0)) {
    throw AdmissibilityError("choose_r: interval too narrow to hold an interior point");
  }
  if (r < e.n_dim && !(e.sigma * e.q < r * e.n_dim / (e.n_dim - r))) {
    throw AdmissibilityError("choose_r: sigma q = " + num(e.sigma * e.q) + " >= r* for r = " + num(r));
  }
  e.r_iter = r;
  return r;
}

}  // namespace gradsys
