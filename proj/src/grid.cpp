#include "gradsys/grid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "gradsys/errors.hpp"
#include "gradsys/kernels.hpp"

namespace gradsys {

GridSpec build_grid(int dim, int n) {
  if (dim != 1 && dim != 2) throw DomainError("build_grid: dim must be 1 or 2, got " + std::to_string(dim));
  if (n < 3) throw DomainError("build_grid: need n >= 3 for an interior node, got " + std::to_string(n));
  GridSpec g;
  g.dim_ = dim;
  g.n_ = n;
  g.h_ = 1.0 / static_cast<double>(n - 1);
  g.size_ = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
  return g;
}

std::size_t GridSpec::interior_count() const {
  const auto m = static_cast<std::size_t>(n_ - 2);
  return dim_ == 1 ? m : m * m;
}

std::vector<unsigned char> GridSpec::boundary_mask() const {
  std::vector<unsigned char> mask(size_);
  for (std::size_t k = 0; k < size_; ++k) mask[k] = is_boundary(k) ? 1 : 0;
  return mask;
}

double GridSpec::quadrature_weight(std::size_t idx) const {
  const auto [i, j] = axes(idx);
  double w = (i == 0 || i == n_ - 1) ? 0.5 * h_ : h_;
  if (dim_ == 2) w *= (j == 0 || j == n_ - 1) ? 0.5 * h_ : h_;
  return w;
}

ScalarField::ScalarField(const GridSpec& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.size()) {
    throw DomainError("ScalarField: " + std::to_string(values_.size()) + " values for a grid of " +
                      std::to_string(grid_.size()) + " nodes");
  }
}

double ScalarField::max_abs() const { return kernels::max_abs(values_); }

double ScalarField::min() const { return *std::min_element(values_.begin(), values_.end()); }

double ScalarField::max() const { return *std::max_element(values_.begin(), values_.end()); }

bool ScalarField::is_finite() const {
  return std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); });
}

bool ScalarField::is_dirichlet() const {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (grid_.is_boundary(k) && values_[k] != 0.0) return false;
  }
  return true;
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  kernels::axpy(1.0, other.values_, values_);
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  kernels::axpy(-1.0, other.values_, values_);
  return *this;
}

ScalarField& ScalarField::operator*=(double a) {
  for (double& v : values_) v *= a;
  return *this;
}

ScalarField VectorField::magnitude() const {
  ScalarField out(grid_);
  auto values = out.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (components_.size() == 1) {
      values[k] = std::abs(components_[0][k]);
    } else {
      values[k] = std::hypot(components_[0][k], components_[1][k]);
    }
  }
  return out;
}

namespace {

double parse_number(std::string_view text, std::string_view descriptor) {
  double value = 0.0;
  const auto* first = text.data();
  const auto* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw DomainError("sample: bad numeric argument in descriptor '" + std::string(descriptor) + "'");
  }
  return value;
}

// sin(pi * i / (n-1)), exactly zero on both ends and symmetric about 1/2.
double sin_node(int i, int n) {
  const int k = std::min(i, n - 1 - i);
  return std::sin(std::numbers::pi * static_cast<double>(k) / static_cast<double>(n - 1));
}

double center_distance(const GridSpec& grid, std::size_t idx) {
  const auto x = grid.coords(idx);
  const double dx = x[0] - 0.5;
  const double dy = grid.dim() == 2 ? x[1] - 0.5 : 0.0;
  return std::hypot(dx, dy);
}

// exp(1 - 1/(1 - t^2)), t = 2x - 1; equals 1 at the center, flat to all
// orders at the boundary.
double bump_axis(int i, int n) {
  if (i == 0 || i == n - 1) return 0.0;
  const double t = 2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
  return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

ScalarField load_file(const GridSpec& grid, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DomainError("sample: cannot open '" + path + "'");
  std::vector<double> values;
  values.reserve(grid.size());
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto last = line.find_last_not_of(" \t\r");
    const std::string_view token(line.data() + first, last - first + 1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
      throw DomainError("sample: " + path + ":" + std::to_string(lineno) + ": not a number");
    }
    values.push_back(v);
  }
  if (values.size() != grid.size()) {
    throw DomainError("sample: " + path + " holds " + std::to_string(values.size()) + " values, grid has " +
                      std::to_string(grid.size()) + " nodes");
  }
  return ScalarField(grid, std::move(values));
}

}  // namespace

ScalarField sample(const GridSpec& grid, std::string_view descriptor, const SampleOptions& options) {
  const auto colon = descriptor.find(':');
  const std::string_view name = descriptor.substr(0, colon);
  const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : descriptor.substr(colon + 1);
  const bool has_arg = colon != std::string_view::npos;
  const int n = grid.n();
  ScalarField out(grid);
  auto values = out.values();

  auto require_arg = [&](bool wanted) {
    if (wanted != has_arg) {
      throw DomainError("sample: descriptor '" + std::string(descriptor) +
                        (wanted ? "' needs an argument" : "' takes no argument"));
    }
  };

  if (name == "zero") {
    require_arg(false);
  } else if (name == "one") {
    require_arg(false);
    std::fill(values.begin(), values.end(), 1.0);
  } else if (name == "sinprod" || name == "sinprod_pow") {
    double k = 1.0;
    if (name == "sinprod_pow") {
      require_arg(true);
      k = parse_number(arg, descriptor);
      if (k <= 0.0) throw DomainError("sample: sinprod_pow needs a positive power");
    } else {
      require_arg(false);
    }
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const auto [i, j] = grid.axes(idx);
      double s = sin_node(i, n);
      if (grid.dim() == 2) s *= sin_node(j, n);
      values[idx] = k == 1.0 ? s : std::pow(s, k);
    }
  } else if (name == "radial_pow") {
    require_arg(true);
    const double a = parse_number(arg, descriptor);
    const double floor = 0.5 * grid.spacing();
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      double r = center_distance(grid, idx);
      if (a < 0.0 && r < floor) {
        if (!options.regularize) {
          throw DomainError("sample: radial_pow:" + std::string(arg) + " is singular at a node near the center");
        }
        r = floor;
      }
      values[idx] = std::pow(r, a);
    }
  } else if (name == "gauss") {
    require_arg(true);
    const double s = parse_number(arg, descriptor);
    if (s <= 0.0) throw DomainError("sample: gauss width must be positive");
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const double r = center_distance(grid, idx);
      values[idx] = std::exp(-0.5 * r * r / (s * s));
    }
  } else if (name == "bump") {
    require_arg(false);
    for (std::size_t idx = 0; idx < values.size(); ++idx) {
      const auto [i, j] = grid.axes(idx);
      double b = bump_axis(i, n);
      if (grid.dim() == 2) b *= bump_axis(j, n);
      values[idx] = b;
    }
  } else if (name == "file") {
    require_arg(true);
    return load_file(grid, std::string(arg));
  } else {
    throw DomainError("sample: unknown descriptor '" + std::string(descriptor) + "'");
  }
  return out;
}

double integrate(const ScalarField& field) { return kernels::weighted_sum(field.grid(), field.values()); }

double integrate_product(const ScalarField& a, const ScalarField& b) {
  ScalarField prod(a.grid());
  auto p = prod.values();
  for (std::size_t k = 0; k < p.size(); ++k) p[k] = a[k] * b[k];
  return integrate(prod);
}

double lp_norm(const ScalarField& field, double s) {
  if (!(s >= 1.0)) throw DomainError("lp_norm: exponent must be >= 1");
  const double m = field.max_abs();
  if (m == 0.0) return 0.0;
  if (!std::isfinite(m)) return std::numeric_limits<double>::infinity();
  ScalarField scaled(field.grid());
  auto out = scaled.values();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = std::pow(std::abs(field[k]) / m, s);
  return m * std::pow(integrate(scaled), 1.0 / s);
}

double w11_norm(const ScalarField& field) {
  return lp_norm(field, 1.0) + lp_norm(gradient(field).magnitude(), 1.0);
}

VectorField gradient(const ScalarField& field) {
  VectorField out(field.grid());
  for (int axis = 0; axis < field.grid().dim(); ++axis) {
    kernels::gradient_axis(field.grid(), field.values(), axis, out.component(axis));
  }
  return out;
}

ScalarField laplacian_apply(const ScalarField& field) {
  ScalarField out(field.grid());
  kernels::neg_laplacian(field.grid(), field.values(), out.values());
  return out;
}

ScalarField positive_power(const ScalarField& field, double q) {
  ScalarField out(field.grid());
  auto values = out.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = std::max(field[k], 0.0);
    values[k] = q == 1.0 ? v : std::pow(v, q);
  }
  return out;
}

ScalarField abs_power(const ScalarField& field, double s) {
  ScalarField out(field.grid());
  auto values = out.values();
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double v = std::abs(field[k]);
    values[k] = s == 1.0 ? v : (s == 2.0 ? v * v : std::pow(v, s));
  }
  return out;
}

}  // namespace gradsys
