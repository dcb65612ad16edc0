#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "motisim/experiments.hpp"

using namespace motisim;

namespace {

constexpr double kPi = std::numbers::pi;

Grid disk(double radius, int n) {
  DomainSpec spec;
  spec.kind = DomainKind::DiskRadial;
  spec.extent = {radius, 1.0};
  spec.resolution = {n, 1};
  return build_grid(spec);
}

}  // namespace

TEST_CASE("bump function") {
  CHECK(bump_function(0.4, 0.2, 0.0) == 1.0);
  CHECK(bump_function(0.4, 0.2, 0.2) == 1.0);
  CHECK(bump_function(0.4, 0.2, 0.4) == 0.0);
  CHECK(bump_function(0.4, 0.2, 1.0) == 0.0);
  CHECK_THROWS_AS(bump_function(0.2, 0.4, 0.1), std::invalid_argument);

  double prev = 1.0;
  for (int i = 0; i <= 1000; ++i) {
    const double rho = 0.5 * i / 1000.0;
    const double phi = bump_function(0.4, 0.2, rho);
    CHECK(phi <= prev + 1e-15);  // radially non-increasing
    CHECK(phi >= 0.0);
    CHECK(phi <= 1.0);
    prev = phi;
  }
}

TEST_CASE("unnormalized profiles") {
  const UnnormalizedProfiles p = unnormalized_profiles(10.0);

  SUBCASE("e^v equals u") {
    for (double rho : {0.0, 0.01, 0.1, 0.3, 1.0})
      CHECK(std::exp(p.v(rho)) ==
            doctest::Approx(p.u(rho)).epsilon(1e-12));
  }

  SUBCASE("planar integral over the disk of radius 10/lambda") {
    const Grid g = disk(1.0, 512);  // radius 10/lambda = 1
    Field u(g);
    for (int i = 0; i < g.size(); ++i) u[i] = p.u(g.nodes[i][0]);
    const double expect = 8.0 * kPi * (1.0 - 1.0 / 101.0);
    CHECK(std::abs(integrate(u) - expect) / expect < 5e-3);
  }

  SUBCASE("v solves the planar Liouville equation under refinement") {
    auto residual = [](int n) {
      const UnnormalizedProfiles prof = unnormalized_profiles(2.0);
      const Grid g = disk(1.0, n);
      Field v(g);
      for (int i = 0; i < g.size(); ++i) v[i] = prof.v(g.nodes[i][0]);
      const Field lap = apply_laplacian(v);
      double err = 0.0;
      for (int i = 2; i < g.size() - 2; ++i)  // interior nodes only
        err = std::max(err, std::abs(lap[i] + prof.u(g.nodes[i][0])));
      return err;
    };
    CHECK(std::log2(residual(128) / residual(256)) >= 1.9);
  }
}

TEST_CASE("blow-up datum") {
  const Grid g = disk(1.0, 512);
  BlowupDatumParams p;
  p.mass_target = 1.25 * 8.0 * kPi;
  p.lambda = 50.0;
  p.r = 0.24;
  p.r1 = 0.12;

  SUBCASE("normalization, bracket, and positivity") {
    const BlowupDatum d = blowup_datum(p, g);
    CHECK(std::abs(integrate(d.u0) - p.mass_target) / p.mass_target <= 1e-8);
    const double f1 = 1.0 - 1.0 / (1.0 + p.r1 * p.r1);
    CHECK(d.a >= p.mass_target / (8.0 * kPi));
    CHECK(d.a <= p.mass_target / (8.0 * kPi * f1));
    CHECK(field_min(d.u0) >= 0.0);
    CHECK(field_min(d.v0) >= 0.0);
    // v exceeds a log 8 on the plateau where phi = 1
    for (int i = 0; i < g.size(); ++i)
      if (g.nodes[i][0] < p.r1)
        CHECK(d.v0[i] > d.a * std::log(8.0));
  }

  SUBCASE("cutoff integral brackets") {
    // int(u_bar phi) strictly between the r1 and r planar disk integrals
    const BlowupDatum d = blowup_datum(p, g);
    const double denom = p.mass_target / d.a;
    const double lo = 8.0 * kPi * (1.0 - 1.0 / (1.0 + std::pow(p.lambda * p.r1, 2)));
    const double hi = 8.0 * kPi * (1.0 - 1.0 / (1.0 + std::pow(p.lambda * p.r, 2)));
    CHECK(denom > lo);
    CHECK(denom < hi);
  }

  SUBCASE("guards") {
    BlowupDatumParams bad = p;
    bad.mass_target = 12.0 * kPi;  // exactly 3 * 4 pi
    CHECK_THROWS_AS(blowup_datum(bad, g), std::invalid_argument);
    bad = p;
    bad.mass_target = 4.0 * kPi;  // not above 8 pi
    CHECK_THROWS_AS(blowup_datum(bad, g), std::invalid_argument);
    bad = p;
    bad.r1 = 0.3;  // r1 >= r
    CHECK_THROWS_AS(blowup_datum(bad, g), std::invalid_argument);
    bad = p;
    bad.lambda = 5000.0;  // under-resolved concentration scale
    CHECK_THROWS_AS(blowup_datum(bad, g), std::invalid_argument);
    bad = p;
    bad.r = 0.6;  // B(0, 2r) leaves the unit disk
    CHECK_THROWS_AS(blowup_datum(bad, g), std::invalid_argument);
  }
}

TEST_CASE("gaussian bump datum") {
  const Grid g = disk(1.0, 256);
  GaussianBumpParams p;
  p.mass = 4.0 * kPi;
  p.width = 0.12;
  const BlowupDatum d = gaussian_bump_datum(p, g);
  CHECK(std::abs(integrate(d.u0) - p.mass) / p.mass <= 1e-12);
  CHECK(field_min(d.v0) >= 0.0);  // (I - Lap)^{-1} preserves positivity
}

TEST_CASE("stationary solver") {
  const Grid g = disk(1.0, 128);
  const double mass = 4.0 * kPi;
  const double mean = mass / g.measure();

  SUBCASE("constant data solve the equation identically") {
    const StationarySolution sol =
        stationary_solve(mass, g, Field(g, mean));
    CHECK(sol.converged);
    CHECK(sol.residual <= 1e-12);
    CHECK(field_max(sol.u_s) == doctest::Approx(mean).epsilon(1e-12));
    CHECK(field_min(sol.u_s) == doctest::Approx(mean).epsilon(1e-12));
  }

  SUBCASE("fixed points are stepper equilibria") {
    Field v_init(g, mean);
    for (int i = 0; i < g.size(); ++i)
      v_init[i] += 0.05 * std::cos(kPi * g.nodes[i][0]);
    const StationarySolution sol = stationary_solve(mass, g, v_init);
    REQUIRE(sol.converged);
    Motility m = Motility::exp_decay();
    SimState s = make_state(sol.u_s, sol.v_s, 1.0);
    const SimState next = step(s, m, 1e-2);
    CHECK(max_abs_diff(next.u, s.u) <= 1e-7);
  }
}

TEST_CASE("empty sweep yields an empty table") {
  SweepConfig cfg;
  cfg.domain.kind = DomainKind::DiskRadial;
  cfg.domain.extent = {1.0, 1.0};
  cfg.domain.resolution = {64, 1};
  CHECK(critical_mass_sweep({}, cfg).empty());
}

TEST_CASE("sweep rows isolate failures and classify constants") {
  SweepConfig cfg;
  cfg.domain.kind = DomainKind::DiskRadial;
  cfg.domain.extent = {1.0, 1.0};
  cfg.domain.resolution = {64, 1};
  cfg.datum = SweepDatum::PaperBlowup;
  cfg.lambda = 4.0;
  cfg.run.dt = 1e-2;
  cfg.run.t_end = 1.0;
  cfg.run.cadence = 1;
  // 12 pi is a multiple of 4 pi: that row must fail alone
  const auto rows = critical_mass_sweep({1.25 * 8.0 * kPi, 12.0 * kPi}, cfg);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].verdict != "Error");
  CHECK(rows[1].verdict == "Error");
  CHECK(!rows[1].abort_reason.empty());
}
