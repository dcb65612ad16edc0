// Low-level array kernels shared by the grid operators and linear solvers.
//
// Every kernel exists twice: the OpenMP version in motisim::kernels and a
// plain serial reference in motisim::kernels::serial. The solvers call the
// OpenMP versions; the test suite checks both against each other and the
// benchmark target compares their throughput.
//
// Reductions (dot, sum, min, max) accumulate per-thread partials over static
// chunks and combine them in thread order, so results are reproducible for a
// fixed thread count.
#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace motisim::kernels {

// y = A x for a CSR matrix with n rows.
void csr_matvec(std::span<const int> row_ptr, std::span<const int> col_idx,
                std::span<const double> values, std::span<const double> x,
                std::span<double> y);

// y = a*x + b*y
void axpby(double a, std::span<const double> x, double b, std::span<double> y);

// z = x .* y (elementwise)
void hadamard(std::span<const double> x, std::span<const double> y,
              std::span<double> z);

double dot(std::span<const double> x, std::span<const double> y);

// sum_i w_i * x_i
double weighted_sum(std::span<const double> w, std::span<const double> x);

double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);

namespace serial {

void csr_matvec(std::span<const int> row_ptr, std::span<const int> col_idx,
                std::span<const double> values, std::span<const double> x,
                std::span<double> y);
void axpby(double a, std::span<const double> x, double b, std::span<double> y);
void hadamard(std::span<const double> x, std::span<const double> y,
              std::span<double> z);
double dot(std::span<const double> x, std::span<const double> y);
double weighted_sum(std::span<const double> w, std::span<const double> x);
double max_abs(std::span<const double> x);
double min_value(std::span<const double> x);
double max_value(std::span<const double> x);

}  // namespace serial

}  // namespace motisim::kernels
