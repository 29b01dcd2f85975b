#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace gradsys {

/// Uniform tensor grid on the unit box [0,1]^dim, dim in {1,2}, with n nodes
/// per axis. Node (i, j) is stored at i + n*j (x runs fastest).
class GridSpec {
 public:
  GridSpec() = default;

  int dim() const { return dim_; }
  int n() const { return n_; }
  double spacing() const { return h_; }
  std::size_t size() const { return size_; }
  std::size_t interior_count() const;

  std::size_t index(int i, int j = 0) const {
    return static_cast<std::size_t>(i) + static_cast<std::size_t>(n_) * static_cast<std::size_t>(j);
  }
  /// Axis indices of a flat node index.
  std::array<int, 2> axes(std::size_t idx) const {
    const int i = static_cast<int>(idx % static_cast<std::size_t>(n_));
    const int j = dim_ == 2 ? static_cast<int>(idx / static_cast<std::size_t>(n_)) : 0;
    return {i, j};
  }
  std::array<double, 2> coords(std::size_t idx) const {
    const auto [i, j] = axes(idx);
    return {i * h_, j * h_};
  }
  bool is_boundary(std::size_t idx) const {
    const auto [i, j] = axes(idx);
    if (i == 0 || i == n_ - 1) return true;
    return dim_ == 2 && (j == 0 || j == n_ - 1);
  }
  /// 1 for nodes on the box boundary, 0 otherwise.
  std::vector<unsigned char> boundary_mask() const;

  /// Composite trapezoid weight of a node.
  double quadrature_weight(std::size_t idx) const;

  bool operator==(const GridSpec&) const = default;

 private:
  friend GridSpec build_grid(int dim, int n);
  int dim_ = 0;
  int n_ = 0;
  double h_ = 0.0;
  std::size_t size_ = 0;
};

/// Uniform grid on the unit box; rejects dim outside {1,2} and n < 3.
GridSpec build_grid(int dim, int n);

/// Nodal real-valued field.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(const GridSpec& grid, double fill = 0.0)
      : grid_(grid), values_(grid.size(), fill) {}
  ScalarField(const GridSpec& grid, std::vector<double> values);

  const GridSpec& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  double max_abs() const;
  double min() const;
  double max() const;
  bool is_finite() const;
  /// Zero at every boundary node.
  bool is_dirichlet() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double a);
  friend ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
  friend ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
  friend ScalarField operator*(double a, ScalarField f) { return f *= a; }

 private:
  GridSpec grid_;
  std::vector<double> values_;
};

/// One nodal array per spatial axis.
class VectorField {
 public:
  explicit VectorField(const GridSpec& grid)
      : grid_(grid), components_(static_cast<std::size_t>(grid.dim()), std::vector<double>(grid.size(), 0.0)) {}

  const GridSpec& grid() const { return grid_; }
  int component_count() const { return static_cast<int>(components_.size()); }
  std::span<const double> component(int axis) const { return components_[static_cast<std::size_t>(axis)]; }
  std::span<double> component(int axis) { return components_[static_cast<std::size_t>(axis)]; }

  /// Pointwise Euclidean length.
  ScalarField magnitude() const;

 private:
  GridSpec grid_;
  std::vector<std::vector<double>> components_;
};

struct SampleOptions {
  /// Clamp |x - c| to h/2 for singular radial powers instead of rejecting.
  bool regularize = true;
};

/// Evaluate a catalog descriptor at every node: "zero", "one", "sinprod",
/// "sinprod_pow:k", "radial_pow:a", "gauss:s", "bump", "file:PATH".
ScalarField sample(const GridSpec& grid, std::string_view descriptor, const SampleOptions& options = {});

/// Composite trapezoid rule over the unit box.
double integrate(const ScalarField& field);
/// Trapezoid integral of the pointwise product.
double integrate_product(const ScalarField& a, const ScalarField& b);
/// (integrate |field|^s)^(1/s), s >= 1. Evaluated with max-scaling so that
/// huge fields do not overflow.
double lp_norm(const ScalarField& field, double s);
/// ||f||_1 + || |grad f| ||_1.
double w11_norm(const ScalarField& field);

/// Centered differences inside, one-sided second-order differences on the
/// boundary.
VectorField gradient(const ScalarField& field);
/// Second-order stencil of -Laplacian at interior nodes; boundary rows
/// return the field value.
ScalarField laplacian_apply(const ScalarField& field);

/// Pointwise max(f, 0)^q.
ScalarField positive_power(const ScalarField& field, double q);
/// Pointwise |f|^s.
ScalarField abs_power(const ScalarField& field, double s);

}  // namespace gradsys
