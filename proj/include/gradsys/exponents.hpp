#pragma once

#include <optional>
#include <string>

namespace gradsys {

/// Exponent tuple of the system: gradient power p, zero-order power q,
/// integrability m of f, integrability sigma of g, and the analytic
/// dimension N (independent of any grid).
struct Exponents {
  double p = 1.0;
  double q = 1.0;
  double m = 2.0;
  double sigma = 2.0;
  double n_dim = 3.0;
  /// Iteration exponent r, set by choose_r.
  std::optional<double> r_iter;

  double pq() const { return p * q; }
};

/// s' = s/(s-1); requires s > 1.
double holder_conjugate(double s);
/// Sobolev exponent sN/(N-s); requires s < N.
double sobolev_star(double s, double n_dim);
/// Young constant (s-1)/s^{s'}; requires s > 1.
double young_constant(double s);
/// (r-1)/r^{r'}, the constant of the Baras-Pierre duality condition.
double k_of_r(double r);

struct AdmissibilityVerdict {
  /// m, sigma in (1,N), pm < sigma*, q sigma/(N + q sigma) < m/(N - m)
  bool subcritical = false;
  /// m >= N and sigma > pmN/(N + pm)
  bool large_m = false;
  /// sigma >= N and m > q sigma N/(N + 2 q sigma)
  bool large_sigma = false;
  /// First failed inequality of each branch, empty when the branch holds.
  std::string why_subcritical, why_large_m, why_large_sigma;

  bool admissible() const { return subcritical || large_m || large_sigma; }
  std::string explanation() const;
};

/// Evaluate the three inequality systems literally.
AdmissibilityVerdict check_admissibility(const Exponents& e);

/// Open interval (lower, upper) for r; an infinite upper end (m >= N) is
/// replaced by 10N and the lower end is raised to 1.
struct RInterval {
  double lower = 0.0;
  double upper = 0.0;
};
RInterval r_interval(const Exponents& e);

/// Geometric mean of r_interval; throws AdmissibilityError when the tuple is
/// not admissible or the interval is empty. Stores the value into e.r_iter.
double choose_r(Exponents& e);

/// Throws AdmissibilityError carrying the violated inequality.
void require_admissible(const Exponents& e);

}  // namespace gradsys
