#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "gradsys/grid.hpp"
#include "gradsys/poisson.hpp"
#include "gradsys/radial.hpp"

namespace gradsys {

/// Integrals above this value are reported as +infinity.
inline constexpr double kDivergenceCeiling = 1e12;

/// Integral of numer * |phi|^power with power < 0, as used by every
/// functional below. Nodes where phi is exactly zero contribute nothing;
/// nodes with 0 < |phi| < 1e-12 max|phi| use the clamped value. Returns
/// +infinity when the integrand blows up like dist^e, e <= -1, along any
/// grid line leaving a zero of phi, or when the sum exceeds the ceiling.
double singular_integral(const ScalarField& phi, const ScalarField& numer, double power);

/// F(phi) = C_p int phi^{1-p'} |grad phi|^{p'} + C_q int phi^{1-q'} |Lap phi|^{q'}.
double functional_F(const ScalarField& phi, double p, double q);

/// G(varphi) = C_p int phi^{1-p'} |grad varphi|^{p'} with -Lap phi = varphi.
double functional_G(const ScalarField& varphi, double p, double tol = kDefaultPoissonTol);

/// k(r) int |Lap phi|^{r'} |phi|^{1-r'} - int h phi; negative values
/// certify nonexistence for -Lap w = w^r + h.
double baras_pierre_gap(const ScalarField& h, const ScalarField& phi, double r);

/// int |grad(|phi|^{p'-2} phi (-Lap phi))|^{p'} |phi|^{-p/(p-1)^2} on the grid.
double functional_Q(const ScalarField& phi, double p);
/// functional_Q(phi) / int f |phi|^{p'}.
double q_ratio(const ScalarField& f, const ScalarField& phi, double p);

/// Nonnegative test functions vanishing on the boundary, each with a
/// positive integral.
struct CandidateFamily {
  std::vector<std::string> ids;
  std::vector<ScalarField> members;

  void add(std::string id, ScalarField member);
  std::size_t size() const { return members.size(); }
};

/// sinprod_pow:k for k in {2,3,4,6} and the product bump.
CandidateFamily default_family(const GridSpec& grid);
CandidateFamily family_from_descriptors(const GridSpec& grid, const std::vector<std::string>& descriptors);

/// One line of the CSV results table.
struct ThresholdRow {
  std::string functional;
  std::string member;
  double value = 0.0;
  double denominator = 0.0;
  double ratio = 0.0;
};

struct ThresholdBound {
  double value = 0.0;  ///< min ratio over the family
  std::string best_member;
  std::vector<ThresholdRow> rows;
};

/// min over members of F(phi) / int g phi: an upper bound for alpha*.
ThresholdBound alpha_star_upper(const ScalarField& g, const CandidateFamily& family, double p, double q);
/// min over members of F(phi) / int f phi: an upper bound for lambda*.
ThresholdBound lambda_star_upper(const ScalarField& f, const CandidateFamily& family, double p, double q);

enum class ThresholdKind { Alpha, Lambda };

/// q = 1 bounds: min of G(varphi) over int g varphi (Alpha) or over
/// int f phi with phi the auxiliary Poisson solution (Lambda).
ThresholdBound q1_threshold_upper(const ScalarField& data, const CandidateFamily& family, double p,
                                  ThresholdKind which, double tol = kDefaultPoissonTol);

/// min over members of q_ratio: upper evidence for the capacity Lambda(f).
ThresholdBound lambda_capacity_upper(const ScalarField& f, const CandidateFamily& family, double p);

/// Header: functional,member,value,denominator,ratio
void write_threshold_csv(std::ostream& os, const std::vector<ThresholdRow>& rows);

// ---------------------------------------------------------------------------
// Radial witness with a datum outside every admissible L^m.

struct WitnessParams {
  int n_dim = 7;
  double p = 2.0;
  double eps = 0.5;
  double gamma = 3.0;

  double p_conj() const;
  /// (N - (3p' + eps))/p'
  double theta() const;
};

struct Witness {
  /// r^{-theta} on (0, 1/4], quintic bridge, (1 - r)^gamma on [1/2, 1].
  RadialProfile phi;
  /// r^{-(3p' + eps)}
  RadialProfile f;
  double theta = 0.0;
  double f_exponent = 0.0;
  double m_max = 0.0;  ///< N/(3p')
};

/// Rejects N <= 3p', theta <= 0, gamma <= (3p'-1)/p' and eps <= 0.
Witness build_witness(const WitnessParams& wp);

/// Radial analog of functional_Q restricted to cutoff < |x| < 1.
double radial_q_numerator(const RadialProfile& phi, double p, int n_dim, double cutoff = 0.0, double tol = 1e-10);
/// int_{cutoff < |x| < 1} f |phi|^{p'}.
double radial_q_denominator(const RadialProfile& f, const RadialProfile& phi, double p, int n_dim, double cutoff,
                            double tol = 1e-10);

struct WitnessStudy {
  std::vector<double> cutoffs;
  std::vector<double> numerators;
  std::vector<double> denominators;
  std::vector<double> ratios;
};

/// Numerator and denominator of the capacity ratio on cutoff < |x| < 1 for
/// each cutoff; the cutoffs must decrease strictly inside (0, 1).
WitnessStudy witness_divergence_study(const WitnessParams& wp, const std::vector<double>& cutoffs,
                                      double tol = 1e-10);

}  // namespace gradsys
