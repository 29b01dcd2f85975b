// Serial reference kernels against their OpenMP versions on a large grid.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include "gradsys/grid.hpp"
#include "gradsys/kernels.hpp"

namespace k = gradsys::kernels;

namespace {

double seconds_per_call(const std::function<void()>& fn, int reps) {
  fn();
  const auto start = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) fn();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count() / reps;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-14s serial %9.3f ms  omp %9.3f ms  speedup %5.2fx\n", name, serial * 1e3, parallel * 1e3,
              serial / parallel);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 1025;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
  const auto grid = gradsys::build_grid(2, n);
  const auto field = gradsys::sample(grid, "sinprod");
  std::vector<double> out(grid.size()), y(grid.size(), 1.0);
  const auto in = field.values();

  std::printf("grid %d x %d, %d threads (OpenMP %s)\n", n, n, k::max_threads(), k::openmp_enabled() ? "on" : "off");
  volatile double sink = 0.0;
  report("neg_laplacian", seconds_per_call([&] { k::serial::neg_laplacian(grid, in, out); }, reps),
         seconds_per_call([&] { k::omp::neg_laplacian(grid, in, out); }, reps));
  report("gradient_axis", seconds_per_call([&] { k::serial::gradient_axis(grid, in, 1, out); }, reps),
         seconds_per_call([&] { k::omp::gradient_axis(grid, in, 1, out); }, reps));
  report("weighted_sum", seconds_per_call([&] { sink = k::serial::weighted_sum(grid, in); }, reps),
         seconds_per_call([&] { sink = k::omp::weighted_sum(grid, in); }, reps));
  report("dot", seconds_per_call([&] { sink = k::serial::dot(in, y); }, reps),
         seconds_per_call([&] { sink = k::omp::dot(in, y); }, reps));
  report("axpy", seconds_per_call([&] { k::serial::axpy(1e-9, in, y); }, reps),
         seconds_per_call([&] { k::omp::axpy(1e-9, in, y); }, reps));
  report("max_abs", seconds_per_call([&] { sink = k::serial::max_abs(in); }, reps),
         seconds_per_call([&] { sink = k::omp::max_abs(in); }, reps));
  (void)sink;
  return 0;
}
