#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "motisim/grid.hpp"

using namespace motisim;

namespace {

Grid make(DomainKind kind, double e0, double e1, int n0, int n1) {
  DomainSpec spec;
  spec.kind = kind;
  spec.extent = {e0, e1};
  spec.resolution = {n0, n1};
  return build_grid(spec);
}

Field random_field(const Grid& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Field f(g);
  for (double& x : f.values) x = unif(rng);
  return f;
}

}  // namespace

TEST_CASE("weights sum to the domain measure") {
  const Grid interval = make(DomainKind::Interval, 2.0, 1.0, 64, 1);
  CHECK(integrate(Field(interval, 1.0)) == doctest::Approx(2.0).epsilon(1e-14));

  const Grid disk = make(DomainKind::DiskRadial, 1.5, 1.0, 128, 1);
  CHECK(integrate(Field(disk, 1.0)) ==
        doctest::Approx(std::numbers::pi * 1.5 * 1.5).epsilon(1e-14));

  const Grid rect = make(DomainKind::Rectangle, 2.0, 3.0, 16, 24);
  CHECK(integrate(Field(rect, 1.0)) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("laplacian annihilates constants and conserves mass") {
  for (const Grid& g : {make(DomainKind::Interval, 1.0, 1.0, 64, 1),
                        make(DomainKind::DiskRadial, 1.0, 1.0, 64, 1),
                        make(DomainKind::Rectangle, 1.0, 1.0, 16, 16)}) {
    const Field lap_c = apply_laplacian(Field(g, 3.7));
    CHECK(field_max(lap_c) <= 1e-11);
    CHECK(field_min(lap_c) >= -1e-11);

    const Field f = random_field(g, 11);
    CHECK(std::abs(integrate(apply_laplacian(f))) <= 1e-11);
  }
}

TEST_CASE("discrete Green identity is exact") {
  for (const Grid& g : {make(DomainKind::Interval, 1.0, 1.0, 48, 1),
                        make(DomainKind::DiskRadial, 1.0, 1.0, 48, 1),
                        make(DomainKind::Rectangle, 1.0, 2.0, 12, 20)}) {
    const Field f = random_field(g, 5);
    const Field lf = apply_laplacian(f);
    double inner = 0.0;
    for (int i = 0; i < g.size(); ++i) inner += g.weights[i] * f[i] * lf[i];
    CHECK(grad_norm_sq(f) == doctest::Approx(-inner).epsilon(1e-12));
  }
}

TEST_CASE("laplacian converges on smooth fields") {
  // Neumann eigenfunction cos(pi x) on [0,1]: Lap f = -pi^2 f
  auto error_at = [](int n) {
    const Grid g = make(DomainKind::Interval, 1.0, 1.0, n, 1);
    Field f(g);
    for (int i = 0; i < g.size(); ++i)
      f[i] = std::cos(std::numbers::pi * g.nodes[i][0]);
    const Field lf = apply_laplacian(f);
    double err = 0.0;
    for (int i = 0; i < g.size(); ++i)
      err = std::max(err,
                     std::abs(lf[i] + std::numbers::pi * std::numbers::pi * f[i]));
    return err;
  };
  const double order = std::log2(error_at(64) / error_at(128));
  CHECK(order >= 1.9);
}

TEST_CASE("radial laplacian of r^2 is 4 away from the boundary") {
  const Grid g = make(DomainKind::DiskRadial, 1.0, 1.0, 128, 1);
  Field f(g);
  for (int i = 0; i < g.size(); ++i) f[i] = g.nodes[i][0] * g.nodes[i][0];
  const Field lf = apply_laplacian(f);
  for (int i = 0; i < g.size() - 2; ++i)
    CHECK(lf[i] == doctest::Approx(4.0).epsilon(1e-9));
}

TEST_CASE("domain validation") {
  DomainSpec spec;
  spec.resolution = {4, 1};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
  spec.resolution = {64, 64};
  spec.extent = {-1.0, 1.0};
  CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}

TEST_CASE("snapshot CSV round trip") {
  const Grid g = make(DomainKind::Rectangle, 1.0, 1.0, 8, 8);
  const Field f = random_field(g, 21);
  const auto path = std::filesystem::temp_directory_path() / "motisim_grid_rt.csv";
  write_field_csv(f, path);
  const Field back = read_field_csv(g, path);
  CHECK(max_abs_diff(f, back) == 0.0);
  std::filesystem::remove(path);
}
