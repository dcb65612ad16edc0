#include "motisim/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace motisim::kernels {

namespace {

// Deterministic parallel reduction: per-thread partials over static chunks,
// combined in thread order.
template <typename Partial>
double reduce_ordered(std::size_t n, double init, Partial partial,
                      double (*combine)(double, double)) {
#ifdef _OPENMP
  int nthreads = 1;
#pragma omp parallel
  {
#pragma omp single
    nthreads = omp_get_num_threads();
  }
  std::vector<double> parts(static_cast<std::size_t>(nthreads), init);
#pragma omp parallel
  {
    const int tid = omp_get_thread_num();
    const std::size_t chunk = (n + nthreads - 1) / nthreads;
    const std::size_t lo = std::min(n, chunk * static_cast<std::size_t>(tid));
    const std::size_t hi = std::min(n, lo + chunk);
    parts[static_cast<std::size_t>(tid)] = partial(lo, hi, init);
  }
  double acc = init;
  for (double p : parts) acc = combine(acc, p);
  return acc;
#else
  return partial(std::size_t{0}, n, init);
#endif
}

double add(double a, double b) { return a + b; }
double take_max(double a, double b) { return a > b ? a : b; }
double take_min(double a, double b) { return a < b ? a : b; }

}  // namespace

void csr_matvec(std::span<const int> row_ptr, std::span<const int> col_idx,
                std::span<const double> values, std::span<const double> x,
                std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(row_ptr.size()) - 1;
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      acc += values[k] * x[col_idx[k]];
    y[i] = acc;
  }
}

void axpby(double a, std::span<const double> x, double b, std::span<double> y) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) y[i] = a * x[i] + b * y[i];
}

void hadamard(std::span<const double> x, std::span<const double> y,
              std::span<double> z) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) z[i] = x[i] * y[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  return reduce_ordered(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi, double acc) {
        for (std::size_t i = lo; i < hi; ++i) acc += x[i] * y[i];
        return acc;
      },
      add);
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
  return dot(w, x);
}

double max_abs(std::span<const double> x) {
  return reduce_ordered(
      x.size(), 0.0,
      [&](std::size_t lo, std::size_t hi, double acc) {
        for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, std::abs(x[i]));
        return acc;
      },
      take_max);
}

double min_value(std::span<const double> x) {
  return reduce_ordered(
      x.size(), std::numeric_limits<double>::infinity(),
      [&](std::size_t lo, std::size_t hi, double acc) {
        for (std::size_t i = lo; i < hi; ++i) acc = std::min(acc, x[i]);
        return acc;
      },
      take_min);
}

double max_value(std::span<const double> x) {
  return reduce_ordered(
      x.size(), -std::numeric_limits<double>::infinity(),
      [&](std::size_t lo, std::size_t hi, double acc) {
        for (std::size_t i = lo; i < hi; ++i) acc = std::max(acc, x[i]);
        return acc;
      },
      take_max);
}

namespace serial {

void csr_matvec(std::span<const int> row_ptr, std::span<const int> col_idx,
                std::span<const double> values, std::span<const double> x,
                std::span<double> y) {
  const std::size_t n = row_ptr.size() - 1;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int k = row_ptr[i]; k < row_ptr[i + 1]; ++k)
      acc += values[k] * x[col_idx[k]];
    y[i] = acc;
  }
}

void axpby(double a, std::span<const double> x, double b, std::span<double> y) {
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = a * x[i] + b * y[i];
}

void hadamard(std::span<const double> x, std::span<const double> y,
              std::span<double> z) {
  for (std::size_t i = 0; i < x.size(); ++i) z[i] = x[i] * y[i];
}

double dot(std::span<const double> x, std::span<const double> y) {
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

double weighted_sum(std::span<const double> w, std::span<const double> x) {
  return dot(w, x);
}

double max_abs(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc = std::max(acc, std::abs(v));
  return acc;
}

double min_value(std::span<const double> x) {
  double acc = std::numeric_limits<double>::infinity();
  for (double v : x) acc = std::min(acc, v);
  return acc;
}

double max_value(std::span<const double> x) {
  double acc = -std::numeric_limits<double>::infinity();
  for (double v : x) acc = std::max(acc, v);
  return acc;
}

}  // namespace serial

}  // namespace motisim::kernels
