#include "motisim/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "motisim/io.hpp"
#include "motisim/kernels.hpp"

namespace motisim {

double lyapunov(const SimState& state) {
  const Grid& g = *state.u.grid;
  double acc = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double u = state.u[i];
    const double v = state.v[i];
    const double entropy = u > 0.0 ? u * std::log(u) : 0.0;
    acc += g.weights[i] * (entropy + 0.5 * v * v - u * v);
  }
  return acc + 0.5 * grad_norm_sq(state.v);
}

double dissipation(const SimState& state, const Field& v_prev, double dt,
                   const Motility& m) {
  if (m.family() != MotilityFamily::ExpDecay)
    throw std::invalid_argument(
        "dissipation identity is only available for the exp-decay motility");
  const Grid& g = *state.u.grid;
  constexpr double u_floor = 1e-14;
  double transport = 0.0;
  for (const Face& f : g.faces) {
    const double ul = state.u[f.left], ur = state.u[f.right];
    const double u_face = 0.5 * (ul + ur);
    if (u_face < u_floor) continue;
    const double v_face = 0.5 * (state.v[f.left] + state.v[f.right]);
    const double dlog =
        std::log(std::max(ur, u_floor)) - std::log(std::max(ul, u_floor));
    const double dv = state.v[f.right] - state.v[f.left];
    const double jump = dlog - dv;
    transport += f.trans * u_face * m(v_face) * jump * jump;
  }
  double relax = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double rate = (state.v[i] - v_prev[i]) / dt;
    relax += g.weights[i] * rate * rate;
  }
  return transport + relax;
}

double key_identity_residual(const SimState& state, const Field& w_prev,
                             double dt, const Motility& m) {
  const Grid& g = *state.u.grid;
  Field gu(g);
  const Field gv = gamma_of(state.v, m);
  kernels::hadamard(gv.values, state.u.values, gu.values);
  const Field smoothed = helmholtz_solve(gu);
  double res = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const double r =
        (state.w[i] - w_prev[i]) / dt + gu[i] - smoothed[i];
    res = std::max(res, std::abs(r));
  }
  return res;
}

ComparisonContext make_comparison_context(const SimState& s0,
                                          const Motility& m) {
  ComparisonContext ctx;
  ctx.w0 = s0.w;
  ctx.tau = s0.tau;
  const double v_min = field_min(s0.v);
  ctx.v_star = v_min > 0.0 ? v_min : 0.0;
  ctx.gamma_v_star = m(std::max(ctx.v_star, m.floor_s()));
  const double a = m.anchor();
  ctx.gamma_a = m(a);
  if (!(ctx.tau * ctx.gamma_a < 1.0))
    throw std::invalid_argument("anchor does not satisfy tau gamma(a) < 1");
  double data_k = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < s0.v.size(); ++i) {
    const double s = std::max(s0.v[i], m.floor_s());
    data_k = std::max(data_k, s0.v[i] - s0.w[i] - ctx.tau * m.big_gamma(s));
  }
  const double proof_k = 2.0 * a * ctx.gamma_v_star + a * ctx.gamma_a;
  ctx.K = std::max(proof_k, data_k) + 1e-12;
  return ctx;
}

std::pair<double, double> comparison_check(const ComparisonContext& ctx,
                                           const SimState& state) {
  const double growth = std::exp(ctx.gamma_v_star * state.t);
  const double denom = 1.0 - ctx.tau * ctx.gamma_a;
  double w_margin = std::numeric_limits<double>::infinity();
  double v_margin = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < state.w.size(); ++i) {
    w_margin = std::min(w_margin, ctx.w0[i] * growth - state.w[i]);
    v_margin = std::min(v_margin, (state.w[i] + ctx.K) / denom - state.v[i]);
  }
  return {w_margin, v_margin};
}

std::string to_string(Boundedness b) {
  switch (b) {
    case Boundedness::Bounded: return "Bounded";
    case Boundedness::Growing: return "Growing";
    default: return "Inconclusive";
  }
}

Boundedness classify_boundedness(const std::vector<DiagnosticsRecord>& records,
                                 double t_end, bool ceiling_abort) {
  if (ceiling_abort) return Boundedness::Growing;
  if (records.size() < 50)
    throw std::invalid_argument("classify_boundedness needs at least 50 records");
  const double span = records.back().t - records.front().t;
  if (span < 0.8 * t_end)
    throw std::invalid_argument(
        "classify_boundedness needs records spanning at least 80% of t_end");

  const std::size_t tail_start = records.size() - records.size() / 3;
  double tail_min = records[tail_start].u_max, tail_max = tail_min;
  // least-squares trend of u_max against log t over the tail
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(records.size() - tail_start);
  for (std::size_t i = tail_start; i < records.size(); ++i) {
    tail_min = std::min(tail_min, records[i].u_max);
    tail_max = std::max(tail_max, records[i].u_max);
    const double x = std::log(std::max(records[i].t, 1e-300));
    const double y = records[i].u_max;
    sx += x; sy += y; sxx += x * x; sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  const double trend = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;

  const double variation = tail_max > 0.0 ? (tail_max - tail_min) / tail_max : 0.0;
  if (variation <= 0.05 && trend <= 0.0) return Boundedness::Bounded;

  double run_max = 0.0;
  for (const auto& r : records) run_max = std::max(run_max, r.u_max);
  const double gain = records.front().u_max > 0.0
                          ? run_max / records.front().u_max
                          : std::numeric_limits<double>::infinity();
  if (gain >= 10.0 && trend > 0.0) return Boundedness::Growing;
  return Boundedness::Inconclusive;
}

namespace {

constexpr const char* kColumns =
    "t,mass,lyapunov_F,dissipation_D,u_max,v_max,w_max,"
    "key_identity_residual,w_bound_margin,v_bound_margin,K_used,step_index";

std::string row_csv(const DiagnosticsRecord& r) {
  std::ostringstream out;
  out << io::full_precision(r.t) << ',' << io::full_precision(r.mass) << ','
      << io::full_precision(r.lyapunov_F) << ','
      << io::full_precision(r.dissipation_D) << ','
      << io::full_precision(r.u_max) << ',' << io::full_precision(r.v_max)
      << ',' << io::full_precision(r.w_max) << ','
      << io::full_precision(r.key_identity_residual) << ','
      << io::full_precision(r.w_bound_margin) << ','
      << io::full_precision(r.v_bound_margin) << ','
      << io::full_precision(r.K_used) << ',' << r.step_index;
  return out.str();
}

}  // namespace

void write_records_csv(const std::vector<DiagnosticsRecord>& records,
                       const std::filesystem::path& path,
                       const std::string& manifest_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "# manifest_hash=" << manifest_hash << '\n' << kColumns << '\n';
  for (const auto& r : records) out << row_csv(r) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

void write_records_jsonl(const std::vector<DiagnosticsRecord>& records,
                         const std::filesystem::path& path,
                         const std::string& manifest_hash) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  for (const auto& r : records) {
    out << "{\"t\":" << io::full_precision(r.t)
        << ",\"mass\":" << io::full_precision(r.mass)
        << ",\"lyapunov_F\":" << io::full_precision(r.lyapunov_F)
        << ",\"dissipation_D\":" << io::full_precision(r.dissipation_D)
        << ",\"u_max\":" << io::full_precision(r.u_max)
        << ",\"v_max\":" << io::full_precision(r.v_max)
        << ",\"w_max\":" << io::full_precision(r.w_max)
        << ",\"key_identity_residual\":"
        << io::full_precision(r.key_identity_residual)
        << ",\"w_bound_margin\":" << io::full_precision(r.w_bound_margin)
        << ",\"v_bound_margin\":" << io::full_precision(r.v_bound_margin)
        << ",\"K_used\":" << io::full_precision(r.K_used)
        << ",\"step_index\":" << r.step_index << ",\"manifest_hash\":\""
        << manifest_hash << "\"}\n";
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::vector<DiagnosticsRecord> read_records_csv(
    const std::filesystem::path& path, std::string* manifest_hash) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line.rfind("# manifest_hash=", 0) != 0)
    throw std::runtime_error("missing manifest hash line in " + path.string());
  if (manifest_hash) *manifest_hash = line.substr(std::string("# manifest_hash=").size());
  if (!std::getline(in, line) || line != kColumns)
    throw std::runtime_error("unexpected header in " + path.string());
  std::vector<DiagnosticsRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    DiagnosticsRecord r;
    char comma;
    if (!(row >> r.t >> comma >> r.mass >> comma >> r.lyapunov_F >> comma >>
          r.dissipation_D >> comma >> r.u_max >> comma >> r.v_max >> comma >>
          r.w_max >> comma >> r.key_identity_residual >> comma >>
          r.w_bound_margin >> comma >> r.v_bound_margin >> comma >> r.K_used >>
          comma >> r.step_index))
      throw std::runtime_error("malformed record row in " + path.string());
    records.push_back(r);
  }
  return records;
}

}  // namespace motisim
