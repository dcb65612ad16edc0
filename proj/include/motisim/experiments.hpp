// Runnable constructions: the concentrated initial datum that drives
// infinite-time growth, the stationary equation -Lap v + v = L e^v / int e^v,
// and the critical-mass sweep that classifies runs across total mass.
#pragma once

#include <array>
#include <string>
#include <vector>

#include "motisim/grid.hpp"
#include "motisim/runner.hpp"

namespace motisim {

// Smooth radial cutoff: exactly 1 for rho <= r1, exactly 0 for rho >= r,
// monotone mollifier-profile transition in between. Requires 0 < r1 < r.
double bump_function(double r, double r1, double rho);

// The radial pair u_l(rho) = 8 l^2 / (1 + l^2 rho^2)^2 and
// v_l(rho) = 2 log(l / (1 + l^2 rho^2)) + log 8, satisfying e^{v_l} = u_l
// and Lap v_l + u_l = 0 with planar total integral 8 pi.
struct UnnormalizedProfiles {
  double lambda = 1.0;
  double u(double rho) const;
  double v(double rho) const;
};
UnnormalizedProfiles unnormalized_profiles(double lambda);

struct BlowupDatumParams {
  double mass_target = 0.0;  // in (8 pi, inf), away from multiples of 4 pi
  double lambda = 100.0;     // >= 1; concentration scale 1/lambda
  double r = 0.24;           // outer cutoff radius, in (0, 1)
  double r1 = 0.12;          // plateau radius, in (0, r)
  std::array<double, 2> center{0.0, 0.0};  // B(center, 2r) must fit in Omega

  // Throws std::invalid_argument on any violated constraint, including the
  // quantization guard (mass at least 1e-3 from every multiple of 4 pi) and
  // the resolution requirement (>= 8 cells inside radius 1/lambda).
  void validate(const Grid& g) const;
};

struct BlowupDatum {
  Field u0;
  Field v0;
  double a = 0.0;  // normalization factor, inside [L/8pi, L/(8pi f(1))]
};

// u0 = a * u_lambda * phi, v0 = a * v_bar * phi with
// v_bar = 2 log((1 + l^2 r^2)/(1 + l^2 rho^2)) + log 8 and
// a = mass_target / int(u_lambda * phi). Throws when a leaves its analytic
// bracket by more than 1%, which signals a quadrature failure.
BlowupDatum blowup_datum(const BlowupDatumParams& p, const Grid& g);

// Normalized Gaussian of the given width; v0 = (I - Lap)^{-1} u0.
struct GaussianBumpParams {
  double mass = 1.0;
  double width = 0.1;
  std::array<double, 2> center{0.0, 0.0};
};
BlowupDatum gaussian_bump_datum(const GaussianBumpParams& p, const Grid& g);

struct StationarySolution {
  Field v_s;
  Field u_s;  // L e^{v_s} / int e^{v_s}
  double mass = 0.0;
  double residual = 0.0;  // ||v_s - Lap v_s - u_s||_inf
  double lyapunov_F = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Damped fixed-point iteration v <- (1-theta) v + theta (I-Lap)^{-1}[L e^v /
// int e^v] until the residual drops below 1e-8 (at most 10^4 iterations).
// Non-convergence is reported, not thrown: expected near the critical mass.
StationarySolution stationary_solve(double mass, const Grid& g,
                                    const Field& v_init, double damping = 0.5);

enum class SweepDatum { GaussianBump, PaperBlowup };

struct SweepConfig {
  DomainSpec domain;
  SweepDatum datum = SweepDatum::GaussianBump;
  double tau = 1.0;
  RunOptions run;  // dt, t_end, cadence, ceiling; out_dir used as sweep root
  // paper-blowup shape parameters (mass comes from the sweep list)
  double lambda = 100.0;
  double r = 0.24;
  double r1 = 0.12;
  double gaussian_width = 0.12;
  int workers = 0;  // 0 = hardware concurrency
};

struct SweepRow {
  double mass = 0.0;
  std::string verdict;  // Bounded / Growing / Inconclusive / Error
  double u_max_final = 0.0;
  double F_initial = 0.0;
  double F_final = 0.0;
  std::string abort_reason;
};

// One exp-decay run per mass; rows execute concurrently and failures stay
// confined to their row. Output order follows the input mass list.
std::vector<SweepRow> critical_mass_sweep(const std::vector<double>& masses,
                                          const SweepConfig& cfg);

void write_sweep_csv(const std::vector<SweepRow>& rows,
                     const std::filesystem::path& path);

}  // namespace motisim
