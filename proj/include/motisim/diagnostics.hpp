// Runtime monitors: the Lyapunov functional, its dissipation, the key
// identity w_t + gamma(v) u = (I - Lap)^{-1}[gamma(v) u], the two comparison
// bounds (w against Gronwall growth of w_0, v against (w + K)/(1 - tau
// gamma(a))), and the boundedness verdict extracted from a diagnostics trace.
#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "motisim/motility.hpp"
#include "motisim/solver.hpp"

namespace motisim {

struct DiagnosticsRecord {
  double t = 0.0;
  double mass = 0.0;
  double lyapunov_F = 0.0;
  double dissipation_D = 0.0;
  double u_max = 0.0;
  double v_max = 0.0;
  double w_max = 0.0;
  double key_identity_residual = 0.0;
  double w_bound_margin = 0.0;
  double v_bound_margin = 0.0;
  double K_used = 0.0;
  long step_index = 0;
};

// F = int (u log u + v^2/2 - u v) + grad_norm_sq(v)/2, with 0 log 0 := 0.
double lyapunov(const SimState& state);

// D = int u e^{-v} |grad log u - grad v|^2 + ||(v - v_prev)/dt||_{L^2}^2.
// The identity behind it is specific to gamma(v) = e^{-v}; throws
// std::invalid_argument for any other family. Faces whose averaged u is
// below 1e-14 contribute zero; the same floor guards the logarithm.
double dissipation(const SimState& state, const Field& v_prev, double dt,
                   const Motility& m);

// L-inf norm of (w - w_prev)/dt + gamma(v) u - (I - Lap)^{-1}[gamma(v) u],
// all terms taken at the current (end-of-step) state.
double key_identity_residual(const SimState& state, const Field& w_prev,
                             double dt, const Motility& m);

// Frozen at run start: everything the pointwise comparison bounds need.
struct ComparisonContext {
  Field w0;
  double v_star = 0.0;        // min of v0 when positive, else 0
  double gamma_v_star = 0.0;  // growth rate in the w-bound
  double gamma_a = 0.0;       // gamma at the anchor; tau gamma(a) < 1
  double tau = 1.0;
  double K = 0.0;  // max(2a gamma(v_*) + a gamma(a), max(v0 - w0 - tau Gamma(v0))) + 1e-12
};

// Requires the motility's anchor to be set (tau gamma(a) < 1).
ComparisonContext make_comparison_context(const SimState& s0, const Motility& m);

// Returns (w_bound_margin, v_bound_margin): the nodewise minima of the bound
// minus the field. Non-negative margins mean the bounds hold.
std::pair<double, double> comparison_check(const ComparisonContext& ctx,
                                           const SimState& state);

enum class Boundedness { Bounded, Growing, Inconclusive };
std::string to_string(Boundedness b);

// Verdict from a trace: Bounded when u_max is flat over the last third
// (variation <= 5%, non-positive trend against log t); Growing when the run
// gained >= 10x with a positive end trend, or hit the blow-up ceiling.
// Requires >= 50 records spanning >= 80% of t_end.
Boundedness classify_boundedness(const std::vector<DiagnosticsRecord>& records,
                                 double t_end, bool ceiling_abort = false);

// One row per record, fixed column order, 17 significant digits; the manifest
// hash rides along as a leading comment line (CSV) or a per-line field (JSONL).
void write_records_csv(const std::vector<DiagnosticsRecord>& records,
                       const std::filesystem::path& path,
                       const std::string& manifest_hash);
void write_records_jsonl(const std::vector<DiagnosticsRecord>& records,
                         const std::filesystem::path& path,
                         const std::string& manifest_hash);
std::vector<DiagnosticsRecord> read_records_csv(const std::filesystem::path& path,
                                                std::string* manifest_hash = nullptr);

}  // namespace motisim
