#include "motisim/experiments.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "motisim/io.hpp"

namespace motisim {

namespace {

constexpr double kPi = std::numbers::pi;

double node_distance(const Grid& g, int i, const std::array<double, 2>& center) {
  const auto& x = g.nodes[static_cast<std::size_t>(i)];
  if (g.is_1d()) return std::abs(x[0] - center[0]);
  return std::hypot(x[0] - center[0], x[1] - center[1]);
}

double max_spacing(const Grid& g) {
  double h = 0.0;
  for (const Face& f : g.faces) h = std::max(h, f.spacing);
  return h;
}

}  // namespace

double bump_function(double r, double r1, double rho) {
  if (!(0.0 < r1 && r1 < r))
    throw std::invalid_argument("bump_function requires 0 < r1 < r");
  if (rho <= r1) return 1.0;
  if (rho >= r) return 0.0;
  const double t = (rho - r1) / (r - r1);
  // partition-of-unity smoothstep built from the mollifier kernel e^{-1/t}
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / t);
  return a / (a + b);
}

double UnnormalizedProfiles::u(double rho) const {
  const double q = 1.0 + lambda * lambda * rho * rho;
  return 8.0 * lambda * lambda / (q * q);
}

double UnnormalizedProfiles::v(double rho) const {
  const double q = 1.0 + lambda * lambda * rho * rho;
  return 2.0 * std::log(lambda / q) + std::log(8.0);
}

UnnormalizedProfiles unnormalized_profiles(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return UnnormalizedProfiles{lambda};
}

void BlowupDatumParams::validate(const Grid& g) const {
  if (!(mass_target > 8.0 * kPi))
    throw std::invalid_argument("mass_target must exceed 8 pi");
  const double q = mass_target / (4.0 * kPi);
  if (std::abs(q - std::round(q)) * 4.0 * kPi < 1e-3)
    throw std::invalid_argument(
        "mass_target too close to a multiple of 4 pi (quantization guard)");
  if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
  if (!(0.0 < r1 && r1 < r && r < 1.0))
    throw std::invalid_argument("need 0 < r1 < r < 1");
  switch (g.domain.kind) {
    case DomainKind::DiskRadial:
      if (center[0] != 0.0 || center[1] != 0.0)
        throw std::invalid_argument("radial disk datum must be centered");
      if (!(2.0 * r < g.domain.extent[0]))
        throw std::invalid_argument("B(center, 2r) does not fit in the disk");
      break;
    case DomainKind::Rectangle:
      for (int ax = 0; ax < 2; ++ax)
        if (!(center[ax] > 2.0 * r && center[ax] < g.domain.extent[ax] - 2.0 * r))
          throw std::invalid_argument("B(center, 2r) does not fit in the rectangle");
      break;
    case DomainKind::Interval:
      throw std::invalid_argument("planar datum needs a two-dimensional domain");
  }
  // tolerance keeps the boundary case (exactly 8 cells) admissible
  if (1.0 / lambda * (1.0 + 1e-12) < 8.0 * max_spacing(g))
    throw std::invalid_argument(
        "grid too coarse: need >= 8 cells inside radius 1/lambda");
}

BlowupDatum blowup_datum(const BlowupDatumParams& p, const Grid& g) {
  p.validate(g);
  const UnnormalizedProfiles prof = unnormalized_profiles(p.lambda);
  const double l2r2 = p.lambda * p.lambda * p.r * p.r;
  Field ubar_phi(g), vbar_phi(g);
  for (int i = 0; i < g.size(); ++i) {
    const double rho = node_distance(g, i, p.center);
    const double phi = bump_function(p.r, p.r1, rho);
    if (phi == 0.0) continue;
    const double q = 1.0 + p.lambda * p.lambda * rho * rho;
    ubar_phi[i] = prof.u(rho) * phi;
    vbar_phi[i] = (2.0 * std::log((1.0 + l2r2) / q) + std::log(8.0)) * phi;
  }
  const double denom = integrate(ubar_phi);
  const double a = p.mass_target / denom;
  const double f1 = 1.0 - 1.0 / (1.0 + p.r1 * p.r1);
  const double lo = p.mass_target / (8.0 * kPi);
  const double hi = p.mass_target / (8.0 * kPi * f1);
  if (a < 0.99 * lo || a > 1.01 * hi)
    throw std::runtime_error(
        "normalization factor left its analytic bracket: quadrature failure");
  BlowupDatum d;
  d.u0 = Field(g);
  d.v0 = Field(g);
  for (int i = 0; i < g.size(); ++i) {
    d.u0[i] = a * ubar_phi[i];
    d.v0[i] = a * vbar_phi[i];
  }
  d.a = a;
  return d;
}

BlowupDatum gaussian_bump_datum(const GaussianBumpParams& p, const Grid& g) {
  if (!(p.mass > 0.0 && p.width > 0.0))
    throw std::invalid_argument("gaussian bump needs positive mass and width");
  BlowupDatum d;
  d.u0 = Field(g);
  for (int i = 0; i < g.size(); ++i) {
    const double rho = node_distance(g, i, p.center);
    d.u0[i] = std::exp(-0.5 * rho * rho / (p.width * p.width));
  }
  const double z = integrate(d.u0);
  for (double& x : d.u0.values) x *= p.mass / z;
  d.v0 = helmholtz_solve(d.u0);
  d.a = p.mass / z;
  return d;
}

StationarySolution stationary_solve(double mass, const Grid& g,
                                    const Field& v_init, double damping) {
  if (!(mass > 0.0)) throw std::invalid_argument("mass must be positive");
  if (!(damping > 0.0 && damping <= 1.0))
    throw std::invalid_argument("damping must lie in (0, 1]");
  StationarySolution sol;
  sol.mass = mass;
  Field v = v_init;
  Field u(g);
  const int max_iter = 10000;
  for (int it = 0; it <= max_iter; ++it) {
    // u = mass e^v / int e^v, with the max shifted out for stable exponentials
    const double shift = field_max(v);
    double z = 0.0;
    for (int i = 0; i < g.size(); ++i) {
      u[i] = std::exp(v[i] - shift);
      z += g.weights[i] * u[i];
    }
    for (double& x : u.values) x *= mass / z;
    const Field lap_v = apply_laplacian(v);
    double res = 0.0;
    for (int i = 0; i < g.size(); ++i)
      res = std::max(res, std::abs(v[i] - lap_v[i] - u[i]));
    sol.residual = res;
    sol.iterations = it;
    if (res <= 1e-8) {
      sol.converged = true;
      break;
    }
    if (it == max_iter) break;
    const Field vh = helmholtz_solve(u);
    for (int i = 0; i < g.size(); ++i)
      v[i] = (1.0 - damping) * v[i] + damping * vh[i];
  }
  sol.v_s = std::move(v);
  sol.u_s = std::move(u);
  SimState tmp;
  tmp.u = sol.u_s;
  tmp.v = sol.v_s;
  sol.lyapunov_F = lyapunov(tmp);
  return sol;
}

std::vector<SweepRow> critical_mass_sweep(const std::vector<double>& masses,
                                          const SweepConfig& cfg) {
  const Grid grid = build_grid(cfg.domain);
  std::vector<SweepRow> rows(masses.size());
  std::atomic<std::size_t> cursor{0};

  auto worker = [&]() {
    for (;;) {
      const std::size_t idx = cursor.fetch_add(1);
      if (idx >= masses.size()) return;
      SweepRow& row = rows[idx];
      row.mass = masses[idx];
      try {
        BlowupDatum d;
        if (cfg.datum == SweepDatum::PaperBlowup) {
          BlowupDatumParams p;
          p.mass_target = masses[idx];
          p.lambda = cfg.lambda;
          p.r = cfg.r;
          p.r1 = cfg.r1;
          d = blowup_datum(p, grid);
        } else {
          GaussianBumpParams p;
          p.mass = masses[idx];
          p.width = cfg.gaussian_width;
          d = gaussian_bump_datum(p, grid);
        }
        Motility m = Motility::exp_decay();
        RunOptions opts = cfg.run;
        if (!opts.out_dir.empty())
          opts.out_dir /= "mass_" + io::full_precision(masses[idx]);
        RunResult res =
            run(make_state(std::move(d.u0), std::move(d.v0), cfg.tau), m, opts);
        row.u_max_final = res.records.back().u_max;
        row.F_initial = res.records.front().lyapunov_F;
        row.F_final = res.records.back().lyapunov_F;
        row.abort_reason = res.abort_reason;
        row.verdict = to_string(classify_boundedness(
            res.records, opts.t_end, res.ceiling_abort));
      } catch (const std::exception& e) {
        row.verdict = "Error";
        row.abort_reason = e.what();
      }
    }
  };

  unsigned n_workers = cfg.workers > 0
                           ? static_cast<unsigned>(cfg.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min<unsigned>(n_workers,
                                 static_cast<unsigned>(std::max<std::size_t>(
                                     masses.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n_workers; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  out << "mass,verdict,u_max_final,F_initial,F_final,abort_reason\n";
  for (const auto& r : rows)
    out << io::full_precision(r.mass) << ',' << r.verdict << ','
        << io::full_precision(r.u_max_final) << ','
        << io::full_precision(r.F_initial) << ','
        << io::full_precision(r.F_final) << ',' << r.abort_reason << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace motisim
