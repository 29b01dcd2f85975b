#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gradsys/exponents.hpp"
#include "gradsys/grid.hpp"
#include "gradsys/poisson.hpp"

namespace gradsys {

// ---------------------------------------------------------------------------
// Threshold algebra of Upsilon(s) = s^{1/pq} - C s.

/// C is the constant C~ of the a priori gradient estimate, ell the maximizer of
/// Upsilon, lambda_star = Upsilon(ell) and s_zero the positive root.
struct ThresholdConstants {
  double pq = 2.0;
  double c_tilde = 1.0;
  double ell = 0.25;
  double lambda_star = 0.25;
  double s_zero = 1.0;

  /// Radius ell^{1/pq} of the invariant set E in the W^{1,r} seminorm.
  double e_radius() const;
};

double upsilon(double s, double pq, double c_tilde);
/// Closed forms: ell = (pq C)^{-pq/(pq-1)}, Lambda* = ell^{1/pq} - C ell,
/// s0 = C^{-pq/(pq-1)}. Rejects pq <= 1, C <= 0 and parameter pairs whose
/// ell underflows.
ThresholdConstants thresholds_from(double pq, double c_tilde);

// ---------------------------------------------------------------------------
// One instance of the system.

struct IterationOptions {
  double tol = 1e-8;  ///< relative W^{1,1} change that stops the iteration
  int max_iter = 200;
  double divergence_factor = 10.0;
  /// Consecutive strictly increasing iterates outside the inflated set
  /// required before declaring divergence.
  int divergence_window = 5;
  double poisson_tol = kDefaultPoissonTol;
  double residual_tol = 1e-4;
};

struct ProblemData {
  ScalarField f;
  ScalarField g;
  double lambda = 0.0;
  double alpha = 0.0;
  Exponents exponents;
  IterationOptions options;

  /// Iteration exponent: exponents.r_iter when set, otherwise choose_r.
  double iteration_exponent() const;
  /// Checks grids, signs and exponent admissibility.
  void validate() const;
};

struct PiMembership {
  double data_term = 0.0;  ///< lambda ||f||_m + alpha^p ||g||_sigma^p
  double bound = 0.0;      ///< Lambda* / C
  bool member = false;
  /// Same test with ||g||_sigma unpowered against Lambda*.
  double data_term_unpowered = 0.0;
  bool member_unpowered = false;
};

PiMembership pi_membership(const ProblemData& d, const ThresholdConstants& t);

struct MapResult {
  ScalarField u;
  ScalarField v;
};

/// u = P(max(w,0)^q + alpha g), v = P(|grad u|^p + lambda f), with P the
/// Dirichlet Poisson solve.
MapResult map_T(const ScalarField& w, const ProblemData& d);

enum class Verdict { Converged, Diverged, MaxIterReached };
std::string to_string(Verdict v);

struct IterationRecord {
  int iter = 0;
  // Long double: diverging iterates leave the double range within a few
  // steps and the trace must still order them.
  long double grad_v_r = 0;
  long double grad_u_p = 0;
  long double rel_change_w11 = 0;
  long double res1 = 0;
  long double res2 = 0;
  bool in_e = true;
};

struct IterationReport {
  std::vector<IterationRecord> trace;
  Verdict verdict = Verdict::MaxIterReached;
  bool in_E_all_iterations = true;
  bool nonfinite = false;
  /// Converged and both weak residuals of the final pair <= residual_tol.
  bool residual_certified = false;
  double e_radius = 0.0;
  double r = 0.0;
  /// Iteration whose fields are returned (the last one representable in
  /// double precision).
  int returned_iter = 0;
};

struct FixedPointResult {
  ScalarField u;
  ScalarField v;
  IterationReport report;
};

/// w <- T(w) from w0 (zero when absent) until the relative W^{1,1} change
/// drops below tol (Converged), the iterates grow strictly for
/// divergence_window steps beyond divergence_factor * ell^{1/pq}
/// (Diverged), or max_iter is reached.
FixedPointResult iterate_to_fixed_point(const ProblemData& d, const ThresholdConstants& t,
                                        const std::optional<ScalarField>& w0 = std::nullopt);

struct WeakResidual {
  double res1 = 0.0;
  double res2 = 0.0;
};

/// sin(j pi x) sin(k pi y), 1 <= j,k <= 5 (five modes in 1-D).
std::vector<ScalarField> default_test_set(const GridSpec& grid);

/// Max over test functions of the integral-identity defects, each divided
/// by 1 + ||grad phi||_2.
WeakResidual weak_residual(const ScalarField& u, const ScalarField& v, const ProblemData& d,
                           const std::vector<ScalarField>& testset);

// ---------------------------------------------------------------------------
// Calibration of C~.

struct CalibrationOptions {
  int probes = 20;
  std::uint64_t seed = 1;
  int max_rounds = 20;
  double rel_tol = 1e-6;
  double initial = 1.0;
};

struct Calibration {
  double c_tilde = 1.0;
  int rounds = 0;
  /// Ratios ||grad T(w)||_r / (||grad w||_r^{pq} + alpha^p||g||^p + lambda||f||)
  /// of the final round.
  std::vector<double> ratios;
};

/// Smallest C making ||grad T(w)||_r <= C (||grad w||_r^{pq} + alpha^p
/// ||g||_sigma^p + lambda ||f||_m) on random smooth probes w in E; the
/// probe radius depends on C, so the estimate is repeated to a fixed point.
Calibration calibrate_c_tilde(const ProblemData& d, const CalibrationOptions& options = {});

}  // namespace gradsys
