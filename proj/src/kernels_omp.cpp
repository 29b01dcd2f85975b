#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gradsys/kernels.hpp"

namespace gradsys::kernels {

namespace {

constexpr std::ptrdiff_t kBlock = 4096;

std::ptrdiff_t block_count(std::size_t size) {
  return (static_cast<std::ptrdiff_t>(size) + kBlock - 1) / kBlock;
}

// Per-block partial sums combined in block order.
template <typename Term>
double blocked_sum(std::size_t size, Term term) {
  const std::ptrdiff_t blocks = block_count(size);
  std::vector<double> partial(static_cast<std::size_t>(blocks), 0.0);
  const auto total = static_cast<std::ptrdiff_t>(size);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < blocks; ++b) {
    const std::ptrdiff_t lo = b * kBlock;
    const std::ptrdiff_t hi = std::min(total, lo + kBlock);
    double s = 0.0;
    for (std::ptrdiff_t k = lo; k < hi; ++k) s += term(static_cast<std::size_t>(k));
    partial[static_cast<std::size_t>(b)] = s;
  }
  double s = 0.0;
  for (double p : partial) s += p;
  return s;
}

}  // namespace

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace omp {

void neg_laplacian(const GridSpec& grid, std::span<const double> in, std::span<double> out) {
  const int n = grid.n();
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  if (grid.dim() == 1) {
    out[0] = in[0];
    out[n - 1] = in[n - 1];
#pragma omp parallel for schedule(static)
    for (int i = 1; i < n - 1; ++i) out[i] = (2.0 * in[i] - in[i - 1] - in[i + 1]) * inv_h2;
    return;
  }
#pragma omp parallel for schedule(static)
  for (int j = 0; j < n; ++j) {
    const std::size_t row = grid.index(0, j);
    if (j == 0 || j == n - 1) {
      for (int i = 0; i < n; ++i) out[row + i] = in[row + i];
      continue;
    }
    out[row] = in[row];
    out[row + n - 1] = in[row + n - 1];
    for (int i = 1; i < n - 1; ++i) {
      const std::size_t k = row + static_cast<std::size_t>(i);
      out[k] = (4.0 * in[k] - in[k - 1] - in[k + 1] - in[k - n] - in[k + n]) * inv_h2;
    }
  }
}

void gradient_axis(const GridSpec& grid, std::span<const double> in, int axis, std::span<double> out) {
  const int n = grid.n();
  const double inv_2h = 0.5 / grid.spacing();
  if (axis == 1) {
    // Whole rows at a time, so every access is unit-stride.
    const auto row = [&](int j) { return in.data() + grid.index(0, j); };
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
      double* q = out.data() + grid.index(0, j);
      if (j == 0) {
        const double *a = row(0), *b = row(1), *c = row(2);
        for (int i = 0; i < n; ++i) q[i] = (-3.0 * a[i] + 4.0 * b[i] - c[i]) * inv_2h;
      } else if (j == n - 1) {
        const double *a = row(n - 1), *b = row(n - 2), *c = row(n - 3);
        for (int i = 0; i < n; ++i) q[i] = (3.0 * a[i] - 4.0 * b[i] + c[i]) * inv_2h;
      } else {
        const double *up = row(j + 1), *down = row(j - 1);
        for (int i = 0; i < n; ++i) q[i] = (up[i] - down[i]) * inv_2h;
      }
    }
    return;
  }
  const int lines = grid.dim() == 1 ? 1 : n;
#pragma omp parallel for schedule(static)
  for (int line = 0; line < lines; ++line) {
    const double* p = in.data() + grid.index(0, line);
    double* q = out.data() + grid.index(0, line);
    q[0] = (-3.0 * p[0] + 4.0 * p[1] - p[2]) * inv_2h;
    for (int t = 1; t < n - 1; ++t) q[t] = (p[t + 1] - p[t - 1]) * inv_2h;
    q[n - 1] = (3.0 * p[n - 1] - 4.0 * p[n - 2] + p[n - 3]) * inv_2h;
  }
}

double weighted_sum(const GridSpec& grid, std::span<const double> in) {
  return blocked_sum(in.size(), [&](std::size_t k) { return grid.quadrature_weight(k) * in[k]; });
}

double dot(std::span<const double> a, std::span<const double> b) {
  return blocked_sum(a.size(), [&](std::size_t k) { return a[k] * b[k]; });
}

void axpy(double a, std::span<const double> x, std::span<double> y) {
  const auto size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < size; ++k) y[k] += a * x[k];
}

void xpby(std::span<const double> x, double b, std::span<double> y) {
  const auto size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < size; ++k) y[k] = x[k] + b * y[k];
}

double max_abs(std::span<const double> x) {
  double m = 0.0;
  const auto size = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static) reduction(max : m)
  for (std::ptrdiff_t k = 0; k < size; ++k) m = std::max(m, std::abs(x[k]));
  return m;
}

}  // namespace omp
}  // namespace gradsys::kernels
