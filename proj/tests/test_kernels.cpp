#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "motisim/grid.hpp"
#include "motisim/kernels.hpp"

using namespace motisim;

namespace {

std::vector<double> random_vec(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = unif(rng);
  return v;
}

Grid rect_grid(int nx, int ny) {
  DomainSpec spec;
  spec.kind = DomainKind::Rectangle;
  spec.extent = {1.0, 1.3};
  spec.resolution = {nx, ny};
  return build_grid(spec);
}

}  // namespace

TEST_CASE("openmp kernels agree with the serial reference") {
  const Grid g = rect_grid(37, 23);  // odd sizes to exercise chunk remainders
  const std::size_t n = static_cast<std::size_t>(g.size());
  const std::vector<double> x = random_vec(n, 1);
  const std::vector<double> y = random_vec(n, 2);

  std::vector<double> omp_out(n), ser_out(n);
  kernels::csr_matvec(g.lap_row_ptr, g.lap_col_idx, g.lap_values, x, omp_out);
  kernels::serial::csr_matvec(g.lap_row_ptr, g.lap_col_idx, g.lap_values, x, ser_out);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(omp_out[i] == doctest::Approx(ser_out[i]).epsilon(1e-14));

  std::vector<double> a = y, b = y;
  kernels::axpby(0.3, x, -1.7, a);
  kernels::serial::axpby(0.3, x, -1.7, b);
  for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == b[i]);

  kernels::hadamard(x, y, omp_out);
  kernels::serial::hadamard(x, y, ser_out);
  for (std::size_t i = 0; i < n; ++i) CHECK(omp_out[i] == ser_out[i]);

  CHECK(kernels::dot(x, y) ==
        doctest::Approx(kernels::serial::dot(x, y)).epsilon(1e-13));
  CHECK(kernels::weighted_sum(g.weights, x) ==
        doctest::Approx(kernels::serial::weighted_sum(g.weights, x)).epsilon(1e-13));
  CHECK(kernels::max_abs(x) == kernels::serial::max_abs(x));
  CHECK(kernels::min_value(x) == kernels::serial::min_value(x));
  CHECK(kernels::max_value(x) == kernels::serial::max_value(x));
}

TEST_CASE("reductions are bit-reproducible across calls") {
  const std::vector<double> x = random_vec(100003, 3);
  const std::vector<double> y = random_vec(100003, 4);
  const double d1 = kernels::dot(x, y);
  const double d2 = kernels::dot(x, y);
  CHECK(d1 == d2);
  CHECK(kernels::weighted_sum(x, y) == kernels::weighted_sum(x, y));
  CHECK(kernels::max_abs(x) == kernels::max_abs(x));
}

TEST_CASE("edge sizes") {
  std::vector<double> one{2.5}, other{-3.0};
  CHECK(kernels::dot(one, other) == -7.5);
  CHECK(kernels::min_value(one) == 2.5);
  std::vector<double> z(1);
  kernels::hadamard(one, other, z);
  CHECK(z[0] == -7.5);
}
