#include "motisim/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace motisim {

namespace {

DiagnosticsRecord make_record(const SimState& s, const ComparisonContext& ctx) {
  DiagnosticsRecord r;
  r.t = s.t;
  r.step_index = s.step_index;
  r.mass = integrate(s.u);
  r.u_max = field_max(s.u);
  r.v_max = field_max(s.v);
  r.w_max = field_max(s.w);
  r.lyapunov_F = lyapunov(s);
  const auto [wm, vm] = comparison_check(ctx, s);
  r.w_bound_margin = wm;
  r.v_bound_margin = vm;
  r.K_used = ctx.K;
  return r;
}

void snapshot(const SimState& s, const std::filesystem::path& dir,
              const std::string& tag) {
  write_field_csv(s.u, dir / ("u_" + tag + ".csv"));
  write_field_csv(s.v, dir / ("v_" + tag + ".csv"));
}

}  // namespace

RunResult run(SimState state0, Motility& m, const RunOptions& opts) {
  if (opts.t_end < 0.0) throw std::invalid_argument("t_end must be non-negative");
  if (!(opts.dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (opts.cadence < 1) throw std::invalid_argument("cadence must be >= 1");
  if (!m.has_anchor()) m.choose_anchor(state0.tau);

  const auto wall_start = std::chrono::steady_clock::now();
  const bool exp_family = m.family() == MotilityFamily::ExpDecay;
  const bool with_files = !opts.out_dir.empty();
  if (with_files) std::filesystem::create_directories(opts.out_dir);

  RunResult result;
  const ComparisonContext ctx = make_comparison_context(state0, m);
  result.records.push_back(make_record(state0, ctx));
  if (with_files) snapshot(state0, opts.out_dir, "initial");

  const long n_steps =
      opts.t_end > 0.0 ? std::lround(std::ceil(opts.t_end / opts.dt - 1e-9)) : 0;
  SimState state = std::move(state0);
  for (long k = 0; k < n_steps; ++k) {
    SimState next;
    try {
      next = step(state, m, opts.dt);
    } catch (const std::runtime_error& e) {
      result.abort_reason = e.what();
      break;
    }
    const bool record_now =
        next.step_index % opts.cadence == 0 || k + 1 == n_steps;
    const bool over_ceiling = field_max(next.u) > opts.ceiling;
    if (record_now || over_ceiling) {
      DiagnosticsRecord r = make_record(next, ctx);
      r.key_identity_residual =
          key_identity_residual(next, state.w, opts.dt, m);
      if (exp_family)
        r.dissipation_D = dissipation(next, state.v, opts.dt, m);
      result.records.push_back(r);
    }
    if (with_files && opts.snapshot_cadence > 0 &&
        next.step_index % opts.snapshot_cadence == 0) {
      char tag[16];
      std::snprintf(tag, sizeof tag, "%08ld", next.step_index);
      snapshot(next, opts.out_dir, tag);
    }
    state = std::move(next);
    if (over_ceiling) {
      result.abort_reason = "blow-up ceiling exceeded";
      result.ceiling_abort = true;
      break;
    }
  }

  if (with_files) snapshot(state, opts.out_dir, "final");
  result.state = std::move(state);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                    wall_start)
          .count();
  return result;
}

}  // namespace motisim
