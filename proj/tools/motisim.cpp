// Command-line front end: run / sweep / check-motility / stationary / verify.
// Exit codes: 0 success, 1 solver or input error, 2 invariant violation
// (verify). The MOTISIM_OUT environment variable overrides the output root.
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "motisim/config.hpp"
#include "motisim/diagnostics.hpp"
#include "motisim/experiments.hpp"
#include "motisim/io.hpp"
#include "motisim/runner.hpp"

namespace {

using namespace motisim;

std::filesystem::path resolve_out_dir(const std::filesystem::path& configured,
                                      const char* fallback) {
  std::filesystem::path dir = configured.empty() ? fallback : configured;
  if (const char* root = std::getenv("MOTISIM_OUT"); root && *root && dir.is_relative())
    dir = std::filesystem::path(root) / dir;
  return dir;
}

void write_manifest(const std::filesystem::path& dir, const std::string& hash,
                    const std::string& abort_reason, double wall_seconds,
                    std::size_t n_records) {
  nlohmann::json manifest{{"manifest_hash", hash},
                          {"abort_reason", abort_reason},
                          {"wall_seconds", wall_seconds},
                          {"records", n_records}};
  std::ofstream out(dir / "manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write manifest.json");
}

int cmd_run(const std::filesystem::path& config_path) {
  const RunConfig cfg = parse_config(config_path);
  const std::string echo = config_echo(cfg);
  const std::string hash = io::fnv1a_hex(echo);
  const Grid grid = build_grid(cfg.domain);
  auto [u0, v0] = make_initial_data(cfg, grid);
  Motility m = make_motility(cfg);

  RunOptions opts;
  opts.dt = cfg.dt;
  opts.t_end = cfg.t_end;
  opts.cadence = cfg.cadence;
  opts.ceiling = cfg.ceiling;
  opts.snapshot_cadence = cfg.snapshot_cadence;
  opts.out_dir = resolve_out_dir(cfg.out_dir, "motisim-out");
  std::filesystem::create_directories(opts.out_dir);
  {
    std::ofstream out(opts.out_dir / "config.ini");
    out << echo;
    if (!out) throw std::runtime_error("cannot write config echo");
  }

  RunResult res = run(make_state(std::move(u0), std::move(v0), cfg.tau), m, opts);
  write_records_csv(res.records, opts.out_dir / "diagnostics.csv", hash);
  write_records_jsonl(res.records, opts.out_dir / "diagnostics.jsonl", hash);
  write_manifest(opts.out_dir, hash, res.abort_reason, res.wall_seconds,
                 res.records.size());

  const DiagnosticsRecord& last = res.records.back();
  std::cout << "run: t = " << last.t << ", mass = " << last.mass
            << ", u_max = " << last.u_max << ", F = " << last.lyapunov_F << '\n';
  if (!res.abort_reason.empty()) {
    std::cout << "aborted: " << res.abort_reason << '\n';
    if (!res.ceiling_abort) return 1;  // solver failure, not the blow-up guard
  }
  return 0;
}

int cmd_sweep(const std::filesystem::path& config_path) {
  const RunConfig cfg = parse_config(config_path);
  if (cfg.sweep_masses.empty())
    throw std::runtime_error("config has no [sweep] masses");
  SweepConfig sc;
  sc.domain = cfg.domain;
  sc.datum = cfg.sweep_datum;
  sc.tau = cfg.tau;
  sc.run.dt = cfg.dt;
  sc.run.t_end = cfg.t_end;
  sc.run.cadence = cfg.cadence;
  sc.run.ceiling = cfg.ceiling;
  sc.run.out_dir = resolve_out_dir(cfg.out_dir, "motisim-sweep");
  sc.lambda = cfg.blowup.lambda;
  sc.r = cfg.blowup.r;
  sc.r1 = cfg.blowup.r1;
  sc.gaussian_width = cfg.gaussian.width;
  sc.workers = cfg.sweep_workers;

  std::filesystem::create_directories(sc.run.out_dir);
  const std::vector<SweepRow> rows = critical_mass_sweep(cfg.sweep_masses, sc);
  write_sweep_csv(rows, sc.run.out_dir / "sweep.csv");
  bool any_error = false;
  for (const auto& row : rows) {
    std::cout << "mass " << row.mass << ": " << row.verdict;
    if (!row.abort_reason.empty()) std::cout << " (" << row.abort_reason << ")";
    std::cout << '\n';
    any_error |= row.verdict == "Error";
  }
  return any_error ? 1 : 0;
}

int cmd_check_motility(const std::string& family, double scale, double k,
                       const std::string& table) {
  Motility m = [&] {
    if (family == "exp-decay") return Motility::exp_decay(scale);
    if (family == "power") return Motility::power(k);
    if (family == "gaussian") return Motility::gaussian(scale);
    if (family == "double-exp") return Motility::double_exp(scale);
    if (family == "tabulated") {
      if (table.empty()) throw std::runtime_error("tabulated needs --table");
      return Motility::tabulated_from_csv(table);
    }
    throw std::runtime_error("unknown family '" + family + "'");
  }();
  std::cout << to_string(m.check_assumptions()) << '\n';
  return 0;
}

int cmd_stationary(const std::filesystem::path& config_path) {
  const RunConfig cfg = parse_config(config_path);
  const Grid grid = build_grid(cfg.domain);
  auto [u0, v0] = make_initial_data(cfg, grid);
  const double mass = integrate(u0);
  const StationarySolution sol = stationary_solve(mass, grid, v0);

  const std::filesystem::path dir = resolve_out_dir(cfg.out_dir, "motisim-stationary");
  std::filesystem::create_directories(dir);
  write_field_csv(sol.u_s, dir / "u_s.csv");
  write_field_csv(sol.v_s, dir / "v_s.csv");
  std::cout << "stationary: mass = " << sol.mass
            << ", residual = " << sol.residual << ", F = " << sol.lyapunov_F
            << ", iterations = " << sol.iterations << '\n';
  if (!sol.converged) {
    std::cout << "did not converge\n";
    return 1;
  }
  return 0;
}

#define CHECK(cond, msg)                          \
  do {                                            \
    if (!(cond)) {                                \
      std::cout << "verify: " << (msg) << '\n';   \
      return 2;                                   \
    }                                             \
  } while (0)

int cmd_verify(const std::filesystem::path& dir) {
  const RunConfig cfg = parse_config(dir / "config.ini");
  const std::string hash = io::fnv1a_hex(config_echo(cfg));

  std::string stored_hash;
  const auto records = read_records_csv(dir / "diagnostics.csv", &stored_hash);
  CHECK(stored_hash == hash, "manifest hash mismatch in diagnostics.csv");
  CHECK(!records.empty(), "no diagnostics records");

  {
    std::ifstream in(dir / "manifest.json");
    CHECK(in.good(), "missing manifest.json");
    nlohmann::json manifest;
    in >> manifest;
    CHECK(manifest.value("manifest_hash", "") == hash,
          "manifest hash mismatch in manifest.json");
  }

  const double mass0 = records.front().mass;
  CHECK(mass0 > 0.0, "non-positive initial mass");
  double prev_t = -std::numeric_limits<double>::infinity();
  for (const auto& r : records) {
    CHECK(r.t > prev_t, "records not strictly increasing in t");
    prev_t = r.t;
    CHECK(r.mass > 0.0, "non-positive mass record");
    CHECK(std::abs(r.mass - mass0) / mass0 <= 1e-9, "mass drift beyond 1e-9");
    CHECK(r.u_max >= -1e-10 && r.v_max >= -1e-10, "negative field maximum");
  }

  const Grid grid = build_grid(cfg.domain);
  const Field u_final = read_field_csv(grid, dir / "u_final.csv");
  const Field v_final = read_field_csv(grid, dir / "v_final.csv");
  CHECK(field_min(u_final) >= -1e-10, "final u violates positivity");
  CHECK(field_min(v_final) >= -1e-10, "final v violates positivity");
  const DiagnosticsRecord& last = records.back();
  const double final_mass = integrate(u_final);
  CHECK(std::abs(final_mass - last.mass) <= 1e-9 * mass0,
        "final snapshot mass disagrees with the last record");
  CHECK(std::abs(field_max(u_final) - last.u_max) <= 1e-9 * (1.0 + last.u_max),
        "final snapshot u_max disagrees with the last record");
  CHECK(std::abs(field_max(v_final) - last.v_max) <= 1e-9 * (1.0 + last.v_max),
        "final snapshot v_max disagrees with the last record");
  // helmholtz_solve enforces the w residual bound internally
  const Field w = helmholtz_solve(u_final);
  CHECK(std::abs(field_max(w) - last.w_max) <= 1e-9 * (1.0 + last.w_max),
        "recomputed w disagrees with the last record");
  std::cout << "verify: ok (" << records.size() << " records)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"structured-grid simulator for signal-suppressed motility"};
  app.require_subcommand(1);

  std::filesystem::path config_path, run_dir;
  std::string family, table;
  double scale = 1.0, k = 1.0;

  auto* run_cmd = app.add_subcommand("run", "advance a configured simulation");
  run_cmd->add_option("config", config_path, "config file")->required();
  auto* sweep_cmd = app.add_subcommand("sweep", "classify runs across total mass");
  sweep_cmd->add_option("config", config_path, "config file")->required();
  auto* check_cmd = app.add_subcommand("check-motility", "assumption ladder verdicts");
  check_cmd->add_option("family", family, "exp-decay | power | gaussian | double-exp | tabulated")
      ->required();
  check_cmd->add_option("--scale", scale, "scale parameter");
  check_cmd->add_option("--k", k, "power exponent");
  check_cmd->add_option("--table", table, "tabulated CSV");
  auto* stat_cmd = app.add_subcommand("stationary", "solve the stationary equation");
  stat_cmd->add_option("config", config_path, "config file")->required();
  auto* verify_cmd = app.add_subcommand("verify", "re-check a run directory");
  verify_cmd->add_option("run_dir", run_dir, "run directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) return cmd_run(config_path);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path);
    if (check_cmd->parsed()) return cmd_check_motility(family, scale, k, table);
    if (stat_cmd->parsed()) return cmd_stationary(config_path);
    if (verify_cmd->parsed()) return cmd_verify(run_dir);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return verify_cmd->parsed() ? 2 : 1;
  }
  return 1;
}
