#pragma once

#include <array>
#include <functional>
#include <variant>
#include <vector>

namespace gradsys {

/// Value and first three radial derivatives at one radius.
struct RadialJet {
  double d0 = 0.0, d1 = 0.0, d2 = 0.0, d3 = 0.0;
};

/// c * r^a
struct PowerPiece {
  double c = 1.0;
  double a = 0.0;
};

/// (1 - r)^gamma
struct OneMinusPiece {
  double gamma = 1.0;
};

/// Quintic in t = (r - r0)/(r1 - r0), coefficients in increasing degree.
struct QuinticPiece {
  double r0 = 0.0, r1 = 1.0;
  std::array<double, 6> coeffs{};
};

using PieceForm = std::variant<PowerPiece, OneMinusPiece, QuinticPiece>;

RadialJet evaluate(const PieceForm& form, double r);

/// Quintic matching value, first and second derivative of both neighbours
/// at r0 and r1.
QuinticPiece hermite_bridge(double r0, const RadialJet& left, double r1, const RadialJet& right);

/// Piecewise closed-form function of |x| on (0, 1].
class RadialProfile {
 public:
  struct Piece {
    double lo;
    double hi;
    PieceForm form;
  };

  RadialProfile() = default;
  /// Pieces must be contiguous, start at 0 and end at 1.
  explicit RadialProfile(std::vector<Piece> pieces);
  static RadialProfile single(const PieceForm& form);

  const std::vector<Piece>& pieces() const { return pieces_; }
  /// Interior junction radii.
  std::vector<double> junctions() const;
  /// Jet at r in (0, 1]; a junction belongs to the piece on its left.
  RadialJet jet(double r) const;
  double value(double r) const { return jet(r).d0; }
  /// Largest relative jump of value, first and second derivative across the
  /// interior junctions.
  double max_junction_jump() const;

 private:
  std::vector<Piece> pieces_;
};

/// phi'' + (N-1) phi'/r; rejects r <= 0.
double radial_laplacian(const RadialProfile& profile, int n_dim, double r);
/// d/dr of the radial Laplacian: phi''' + (N-1)(phi''/r - phi'/r^2).
double radial_laplacian_derivative(const RadialProfile& profile, int n_dim, double r);

/// Area 2 pi^{N/2} / Gamma(N/2) of the unit sphere in R^N, via the
/// half-integer recurrence of Gamma.
double unit_sphere_area(int n_dim);

/// omega_{N-1} * integral_a^b integrand(r) r^{N-1} dr by adaptive Simpson on
/// panels that halve in length toward a. For a = 0 the remaining tail is
/// extrapolated geometrically; QuadratureError when it does not decay within
/// the panel cap. tol is relative.
double radial_integrate(const std::function<double(double)>& integrand, int n_dim, double a, double b,
                        double tol = 1e-10);

}  // namespace gradsys
