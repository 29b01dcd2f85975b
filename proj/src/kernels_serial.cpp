#include <algorithm>
#include <cmath>

#include "gradsys/kernels.hpp"

namespace gradsys::kernels::serial {

void neg_laplacian(const GridSpec& grid, std::span<const double> in, std::span<double> out) {
  const int n = grid.n();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  if (grid.dim() == 1) {
    out[0] = in[0];
    out[n - 1] = in[n - 1];
    for (int i = 1; i < n - 1; ++i) out[i] = (2.0 * in[i] - in[i - 1] - in[i + 1]) * inv_h2;
    return;
  }
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const std::size_t k = grid.index(i, j);
      if (i == 0 || j == 0 || i == n - 1 || j == n - 1) {
        out[k] = in[k];
        continue;
      }
      out[k] = (4.0 * in[k] - in[k - 1] - in[k + 1] - in[k - n] - in[k + n]) * inv_h2;
    }
  }
}

void gradient_axis(const GridSpec& grid, std::span<const double> in, int axis, std::span<double> out) {
  const int n = grid.n();
  const double inv_2h = 0.5 / grid.spacing();
  const std::size_t stride = axis == 0 ? 1 : static_cast<std::size_t>(n);
  const int lines = grid.dim() == 1 ? 1 : n;
  for (int line = 0; line < lines; ++line) {
    const std::size_t base = axis == 0 ? grid.index(0, line) : grid.index(line, 0);
    auto at = [&](int t) { return in[base + static_cast<std::size_t>(t) * stride]; };
    for (int t = 0; t < n; ++t) {
      double d;
      if (t == 0) {
        d = (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv_2h;
      } else if (t == n - 1) {
        d = (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) * inv_2h;
      } else {
        d = (at(t + 1) - at(t - 1)) * inv_2h;
      }
      out[base + static_cast<std::size_t>(t) * stride] = d;
    }
  }
}

double weighted_sum(const GridSpec& grid, std::span<const double> in) {
  double s = 0.0;
  for (std::size_t k = 0; k < in.size(); ++k) s += grid.quadrature_weight(k) * in[k];
  return s;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
  return s;
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] = x[k] + b * y[k];
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace gradsys::kernels::serial
