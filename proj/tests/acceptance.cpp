// The acceptance gate: ten independently runnable criteria, one per CLI
// argument (1-10). Each prints a single PASS/FAIL line with the measured
// numbers and exits 0 on pass, 1 on fail.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "motisim/diagnostics.hpp"
#include "motisim/experiments.hpp"
#include "motisim/runner.hpp"

using namespace motisim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

Grid disk(double radius, int n) {
  DomainSpec spec;
  spec.kind = DomainKind::DiskRadial;
  spec.extent = {radius, 1.0};
  spec.resolution = {n, 1};
  return build_grid(spec);
}

Grid interval(int n) {
  DomainSpec spec;
  spec.kind = DomainKind::Interval;
  spec.extent = {1.0, 1.0};
  spec.resolution = {n, 1};
  return build_grid(spec);
}

SimState gaussian_state(const Grid& g, double mass, double width, double tau) {
  GaussianBumpParams p;
  p.mass = mass;
  p.width = width;
  BlowupDatum d = gaussian_bump_datum(p, g);
  return make_state(std::move(d.u0), std::move(d.v0), tau);
}

SimState cosine_state(const Grid& g, double tau) {
  Field u0(g), v0(g);
  for (int i = 0; i < g.size(); ++i) {
    u0[i] = 1.0 + 0.5 * std::cos(kPi * g.nodes[i][0]);
    v0[i] = 1.0 + 0.3 * std::cos(kPi * g.nodes[i][0]);
  }
  return make_state(std::move(u0), std::move(v0), tau);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// --- 1: mass conservation ---------------------------------------------------
Outcome criterion1() {
  const Grid g = disk(1.0, 256);
  Motility m = Motility::exp_decay();
  RunOptions opts;
  opts.dt = 1e-3;
  opts.t_end = 1.1;  // 1100 steps
  opts.cadence = 10;
  const RunResult res =
      run(gaussian_state(g, 0.75 * 8.0 * kPi, 0.12, 1.0), m, opts);
  const double mass0 = res.records.front().mass;
  double drift = 0.0;
  for (const auto& r : res.records)
    drift = std::max(drift, std::abs(r.mass - mass0) / mass0);
  return {res.abort_reason.empty() && drift <= 1e-9,
          fmt("max relative mass drift %.3e over %ld steps (tolerance 1e-9)",
              drift, res.state.step_index)};
}

// --- 2: closed-form quadrature ----------------------------------------------
Outcome criterion2() {
  const std::pair<double, double> cases[] = {{10.0, 0.5}, {50.0, 0.2}, {100.0, 0.1}};
  bool pass = true;
  std::ostringstream detail;
  for (const auto& [lambda, ell] : cases) {
    const Grid g = disk(ell, 512);
    const UnnormalizedProfiles p = unnormalized_profiles(lambda);
    Field u(g);
    for (int i = 0; i < g.size(); ++i) u[i] = p.u(g.nodes[i][0]);
    const double expect =
        8.0 * kPi * (1.0 - 1.0 / (1.0 + lambda * lambda * ell * ell));
    const double rel = std::abs(integrate(u) - expect) / expect;
    pass = pass && rel < 5e-3;
    detail << fmt("(lambda=%g, l=%g): %.2e  ", lambda, ell, rel);
  }
  return {pass, "relative quadrature errors " + detail.str() + "(tolerance 5e-3)"};
}

// --- 3: comparison bounds ---------------------------------------------------
Outcome criterion3() {
  bool pass = true;
  std::ostringstream detail;
  for (double tau : {0.5, 1.0, 2.0}) {
    const Grid g = disk(1.0, 256);
    Motility m = Motility::exp_decay();
    RunOptions opts;
    opts.dt = 1e-3;
    opts.t_end = 20.0;
    opts.cadence = 10;
    const RunResult res = run(gaussian_state(g, 4.0 * kPi, 0.12, tau), m, opts);
    double w_min = 1e300, v_min = 1e300;
    for (const auto& r : res.records) {
      w_min = std::min(w_min, r.w_bound_margin);
      v_min = std::min(v_min, r.v_bound_margin);
    }
    pass = pass && res.abort_reason.empty() && w_min >= -1e-8 && v_min >= -1e-8;
    detail << fmt("tau=%g: w %.2e v %.2e  ", tau, w_min, v_min);
  }
  return {pass, "minimum bound margins " + detail.str() + "(must be >= -1e-8)"};
}

// --- 4: key identity refinement ---------------------------------------------
Outcome criterion4() {
  const Grid g = interval(128);
  Motility m = Motility::exp_decay();
  std::vector<double> residuals;
  for (double dt : {4e-4, 2e-4, 1e-4}) {
    RunOptions opts;
    opts.dt = dt;
    opts.t_end = 0.05;
    opts.cadence = static_cast<int>(std::lround(0.05 / dt));  // final record only
    const RunResult res = run(cosine_state(g, 1.0), m, opts);
    residuals.push_back(res.records.back().key_identity_residual);
  }
  const double o1 = std::log2(residuals[0] / residuals[1]);
  const double o2 = std::log2(residuals[1] / residuals[2]);
  return {o1 >= 0.9 && o2 >= 0.9,
          fmt("observed orders %.3f, %.3f across dt = 4e-4 / 2e-4 / 1e-4 "
              "(threshold 0.9)", o1, o2)};
}

// --- 5: Lyapunov dissipation ------------------------------------------------
Outcome criterion5() {
  // monotonicity along a smooth sub-critical run
  const Grid g = disk(1.0, 256);
  Motility m = Motility::exp_decay();
  RunOptions opts;
  opts.dt = 1e-3;
  opts.t_end = 5.0;
  opts.cadence = 10;
  const RunResult res = run(gaussian_state(g, 4.0 * kPi, 0.12, 1.0), m, opts);
  double worst = 0.0;
  for (std::size_t i = 1; i < res.records.size(); ++i) {
    const double prev = res.records[i - 1].lyapunov_F;
    const double rise = res.records[i].lyapunov_F - prev;
    const double tol = 1e-6 * (1.0 + std::abs(prev));
    worst = std::max(worst, rise - tol);
  }
  const bool monotone = worst <= 0.0;

  // discrete balance |dF/dt + D| under simultaneous dt/8, h/2 refinement
  auto balance = [&](int n, double dt) {
    const Grid gn = interval(n);
    Motility mm = Motility::exp_decay();
    RunOptions o;
    o.dt = dt;
    o.t_end = 0.1;
    o.cadence = 1;
    const RunResult r = run(cosine_state(gn, 1.0), mm, o);
    double worst_gap = 0.0;
    for (std::size_t i = 1; i < r.records.size(); ++i) {
      const double dF =
          (r.records[i].lyapunov_F - r.records[i - 1].lyapunov_F) / dt;
      worst_gap = std::max(worst_gap, std::abs(dF + r.records[i].dissipation_D));
    }
    return worst_gap;
  };
  const double b0 = balance(64, 4e-3);
  const double b1 = balance(128, 5e-4);
  const double b2 = balance(256, 6.25e-5);
  const bool shrinking = b1 < b0 && b2 < b1;
  return {monotone && shrinking,
          fmt("max tolerated F rise %.2e; balance gaps %.2e -> %.2e -> %.2e "
              "under (dt/8, h/2) refinement", worst, b0, b1, b2)};
}

// --- 6: critical-mass dichotomy ---------------------------------------------
Outcome criterion6() {
  SweepConfig sub;
  sub.domain.kind = DomainKind::DiskRadial;
  sub.domain.extent = {1.0, 1.0};
  sub.domain.resolution = {512, 1};
  sub.datum = SweepDatum::GaussianBump;
  sub.gaussian_width = 0.12;
  sub.run.dt = 2e-3;
  sub.run.t_end = 1000.0;
  sub.run.cadence = 5000;
  const auto sub_rows =
      critical_mass_sweep({0.5 * 8.0 * kPi, 0.75 * 8.0 * kPi}, sub);

  SweepConfig super;
  super.domain.kind = DomainKind::DiskRadial;
  super.domain.extent = {0.64, 1.0};  // keeps 8 cells inside 1/lambda at n=512
  super.domain.resolution = {512, 1};
  super.datum = SweepDatum::PaperBlowup;
  super.lambda = 100.0;
  super.r = 0.24;
  super.r1 = 0.12;
  super.run.dt = 2e-3;
  super.run.t_end = 1000.0;
  super.run.cadence = 5000;
  const auto super_rows = critical_mass_sweep({1.25 * 8.0 * kPi}, super);

  const bool pass = sub_rows[0].verdict == "Bounded" &&
                    sub_rows[1].verdict == "Bounded" &&
                    super_rows[0].verdict == "Growing";
  return {pass,
          fmt("0.5*8pi: %s, 0.75*8pi: %s (want Bounded); 1.25*8pi blow-up "
              "datum: %s (want Growing)",
              sub_rows[0].verdict.c_str(), sub_rows[1].verdict.c_str(),
              super_rows[0].verdict.c_str())};
}

// --- 7: blow-up datum energy slope ------------------------------------------
Outcome criterion7() {
  const Grid g = disk(0.5, 2048);
  const double mass = 1.25 * 8.0 * kPi;
  const std::vector<double> lambdas = {20.0, 50.0, 100.0, 200.0};
  std::vector<double> F, a;
  bool bracket_ok = true;
  for (double lambda : lambdas) {
    BlowupDatumParams p;
    p.mass_target = mass;
    p.lambda = lambda;
    p.r = 0.24;
    p.r1 = 0.12;
    const BlowupDatum d = blowup_datum(p, g);
    const double f1 = 1.0 - 1.0 / (1.0 + p.r1 * p.r1);
    bracket_ok = bracket_ok && d.a >= mass / (8.0 * kPi) &&
                 d.a <= mass / (8.0 * kPi * f1);
    SimState s;
    s.u = d.u0;
    s.v = d.v0;
    F.push_back(lyapunov(s));
    a.push_back(d.a);
  }
  // least-squares slope of F against log lambda
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(lambdas.size());
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const double x = std::log(lambdas[i]);
    sx += x; sy += F[i]; sxx += x * x; sxy += x * F[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  const double a_mean = (a[0] + a[1] + a[2] + a[3]) / 4.0;
  const double target = -16.0 * kPi * a_mean * (a_mean - 1.0);
  const double rel = std::abs(slope - target) / std::abs(target);
  return {bracket_ok && rel <= 0.15,
          fmt("slope %.4f vs -16 pi a(a-1) = %.4f (a_mean %.4f): off by %.1f%% "
              "(limit 15%%); bracket %s",
              slope, target, a_mean, 100.0 * rel, bracket_ok ? "ok" : "violated")};
}

// --- 8: stationary cross-validation -----------------------------------------
Outcome criterion8() {
  const Grid g = disk(1.0, 256);
  const double mass = 0.5 * 8.0 * kPi;
  const double mean = mass / g.measure();

  const StationarySolution flat = stationary_solve(mass, g, Field(g, mean));
  const bool const_ok = flat.converged && flat.residual <= 1e-12;

  Field v_init(g, mean);
  for (int i = 0; i < g.size(); ++i)
    v_init[i] += 0.1 * std::cos(kPi * g.nodes[i][0]);
  const StationarySolution sol = stationary_solve(mass, g, v_init);

  Motility m = Motility::exp_decay();
  RunOptions opts;
  opts.dt = 1e-2;
  opts.t_end = 200.0;
  opts.cadence = 1000;
  const RunResult res = run(gaussian_state(g, mass, 0.12, 1.0), m, opts);

  const double du = max_abs_diff(res.state.u, sol.u_s);
  const double dv = max_abs_diff(res.state.v, sol.v_s);
  return {const_ok && sol.converged && res.abort_reason.empty() &&
              du <= 1e-3 && dv <= 1e-3,
          fmt("constant residual %.2e (<= 1e-12); |u - u_s| %.2e, |v - v_s| "
              "%.2e at t = 200 (<= 1e-3)", flat.residual, du, dv)};
}

// --- 9: assumption ladder ---------------------------------------------------
Outcome criterion9() {
  const AssumptionReport reports[] = {
      Motility::exp_decay().check_assumptions(),
      Motility::power(1.0).check_assumptions(),
      Motility::power(2.0).check_assumptions(),
      Motility::gaussian().check_assumptions(),
      Motility::double_exp().check_assumptions(),
  };
  const bool table_ok = reports[0].a3 == Verdict::Fail &&
                        reports[1].a3 == Verdict::Pass &&
                        reports[2].a3 == Verdict::Fail;
  bool implication_ok = true;  // A0 + A1 + A3 must force an A2 exponent
  for (const auto& r : reports)
    if (r.a0 && r.a1 && r.a3 == Verdict::Pass && !r.a2_k)
      implication_ok = false;
  return {table_ok && implication_ok,
          fmt("exp-decay A3 %s (want fail), power k=1 A3 %s (want pass), "
              "power k=2 A3 %s (want fail); A3 => A2 implication %s",
              reports[0].a3 == Verdict::Fail ? "fail" : "pass",
              reports[1].a3 == Verdict::Pass ? "pass" : "fail",
              reports[2].a3 == Verdict::Fail ? "fail" : "pass",
              implication_ok ? "holds" : "violated")};
}

// --- 10: dense oracle --------------------------------------------------------
Outcome criterion10() {
  const Grid g = interval(8);
  const std::size_t n = 8;
  Field u0(g), v0(g);
  for (std::size_t i = 0; i < n; ++i) {
    u0[i] = 0.3 + 0.1 * static_cast<double>(i);
    v0[i] = 0.8 + 0.07 * static_cast<double>((i * 3) % 5);
  }
  Motility m = Motility::exp_decay();
  const double dt = 0.02, tau = 1.0;
  const SimState s1 = step(make_state(u0, v0, tau), m, dt);

  std::vector<std::vector<double>> L(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i)
    for (int k = g.lap_row_ptr[i]; k < g.lap_row_ptr[i + 1]; ++k)
      L[i][static_cast<std::size_t>(g.lap_col_idx[k])] = g.lap_values[k];

  auto dense_solve = [](std::vector<std::vector<double>> A,
                        std::vector<double> b) {
    const std::size_t m_ = b.size();
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < m_; ++r)
        if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
      std::swap(A[col], A[piv]);
      std::swap(b[col], b[piv]);
      for (std::size_t r = col + 1; r < m_; ++r) {
        const double f = A[r][col] / A[col][col];
        for (std::size_t c = col; c < m_; ++c) A[r][c] -= f * A[col][c];
        b[r] -= f * b[col];
      }
    }
    std::vector<double> x(m_);
    for (std::size_t i = m_; i-- > 0;) {
      double acc = b[i];
      for (std::size_t j = i + 1; j < m_; ++j) acc -= A[i][j] * x[j];
      x[i] = acc / A[i][i];
    }
    return x;
  };

  const Field gv = gamma_of(v0, m);
  std::vector<std::vector<double>> Au(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    Au[i][i] = 1.0;
    for (std::size_t j = 0; j < n; ++j) Au[i][j] -= dt * L[i][j] * gv[j];
  }
  const std::vector<double> u1 = dense_solve(Au, u0.values);

  std::vector<std::vector<double>> Av(n, std::vector<double>(n, 0.0));
  std::vector<double> bv(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) Av[i][j] = -L[i][j];
    Av[i][i] += tau / dt + 1.0;
    bv[i] = tau / dt * v0[i] + u1[i];
  }
  const std::vector<double> v1 = dense_solve(Av, bv);

  std::vector<std::vector<double>> Aw(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) Aw[i][j] = -L[i][j];
    Aw[i][i] += 1.0;
  }
  const std::vector<double> w1 = dense_solve(Aw, u1);

  double err = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    err = std::max(err, std::abs(s1.u[i] - u1[i]));
    err = std::max(err, std::abs(s1.v[i] - v1[i]));
    err = std::max(err, std::abs(s1.w[i] - w1[i]));
  }
  return {err <= 1e-12,
          fmt("max deviation from the dense 8-cell solve %.3e (tolerance 1e-12)",
              err)};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <criterion 1-10>\n");
    return 2;
  }
  const int which = std::atoi(argv[1]);
  Outcome (*criteria[])() = {criterion1, criterion2, criterion3, criterion4,
                             criterion5, criterion6, criterion7, criterion8,
                             criterion9, criterion10};
  if (which < 1 || which > 10) {
    std::fprintf(stderr, "criterion must be 1-10\n");
    return 2;
  }
  Outcome outcome;
  try {
    outcome = criteria[which - 1]();
  } catch (const std::exception& e) {
    outcome = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d: %s — %s\n", which, outcome.pass ? "PASS" : "FAIL",
              outcome.detail.c_str());
  return outcome.pass ? 0 : 1;
}
