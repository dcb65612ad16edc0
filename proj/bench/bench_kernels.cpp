// Throughput comparison of the OpenMP kernels against the serial reference,
// on the operators the solvers actually spend their time in: the Laplacian
// matvec, dot products, and a full Helmholtz solve on a 512x512 rectangle.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <vector>

#include "motisim/grid.hpp"
#include "motisim/kernels.hpp"
#include "motisim/linsolve.hpp"

using namespace motisim;

namespace {

double time_of(const std::function<void()>& body, int reps) {
  body();  // warm-up
  const auto start = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) body();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
             .count() /
         reps;
}

void report(const char* name, double serial_s, double omp_s) {
  std::printf("%-24s serial %10.3e s   omp %10.3e s   speedup %5.2fx\n", name,
              serial_s, omp_s, serial_s / omp_s);
}

}  // namespace

int main() {
  DomainSpec spec;
  spec.kind = DomainKind::Rectangle;
  spec.extent = {1.0, 1.0};
  spec.resolution = {512, 512};
  const Grid g = build_grid(spec);
  const std::size_t n = static_cast<std::size_t>(g.size());

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  std::vector<double> x(n), y(n), z(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = unif(rng);
  for (std::size_t i = 0; i < n; ++i) y[i] = unif(rng);

  report("csr_matvec",
         time_of([&] { kernels::serial::csr_matvec(g.lap_row_ptr, g.lap_col_idx,
                                                   g.lap_values, x, z); },
                 50),
         time_of([&] { kernels::csr_matvec(g.lap_row_ptr, g.lap_col_idx,
                                           g.lap_values, x, z); },
                 50));
  report("dot",
         time_of([&] { volatile double d = kernels::serial::dot(x, y); (void)d; }, 200),
         time_of([&] { volatile double d = kernels::dot(x, y); (void)d; }, 200));
  report("axpby",
         time_of([&] { kernels::serial::axpby(0.5, x, 0.5, y); }, 200),
         time_of([&] { kernels::axpby(0.5, x, 0.5, y); }, 200));
  report("weighted_sum",
         time_of([&] { volatile double d = kernels::serial::weighted_sum(g.weights, x); (void)d; }, 200),
         time_of([&] { volatile double d = kernels::weighted_sum(g.weights, x); (void)d; }, 200));

  Field rhs(g);
  for (std::size_t i = 0; i < n; ++i) rhs[i] = x[i];
  const double helmholtz_s = time_of(
      [&] { Field w = solve_shifted_helmholtz(g, 1.0, rhs); (void)w; }, 3);
  std::printf("%-24s %10.3e s per solve (CG, 512x512)\n", "helmholtz",
              helmholtz_s);
  return 0;
}
