#pragma once

// Data-parallel inner loops. Each kernel exists twice: a plain serial
// reference and an OpenMP version. The OpenMP reductions sum fixed-size
// blocks in index order, so results do not depend on the thread count.

#include <cstddef>
#include <span>

#include "gradsys/grid.hpp"

namespace gradsys::kernels {

namespace serial {
void neg_laplacian(const GridSpec& grid, std::span<const double> in, std::span<double> out);
void gradient_axis(const GridSpec& grid, std::span<const double> in, int axis, std::span<double> out);
double weighted_sum(const GridSpec& grid, std::span<const double> in);
double dot(std::span<const double> a, std::span<const double> b);
/// y += a * x
void axpy(double a, std::span<const double> x, std::span<double> y);
/// y = x + b * y
void xpby(std::span<const double> x, double b, std::span<double> y);
double max_abs(std::span<const double> x);
}  // namespace serial

namespace omp {
void neg_laplacian(const GridSpec& grid, std::span<const double> in, std::span<double> out);
void gradient_axis(const GridSpec& grid, std::span<const double> in, int axis, std::span<double> out);
double weighted_sum(const GridSpec& grid, std::span<const double> in);
double dot(std::span<const double> a, std::span<const double> b);
void axpy(double a, std::span<const double> x, std::span<double> y);
void xpby(std::span<const double> x, double b, std::span<double> y);
double max_abs(std::span<const double> x);
}  // namespace omp

/// True when the omp namespace was compiled with OpenMP enabled.
bool openmp_enabled();
int max_threads();

// Kernels used by the library.
using omp::axpy;
using omp::dot;
using omp::gradient_axis;
using omp::max_abs;
using omp::neg_laplacian;
using omp::weighted_sum;
using omp::xpby;

}  // namespace gradsys::kernels
