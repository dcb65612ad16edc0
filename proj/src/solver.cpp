#include "motisim/solver.hpp"

#include <cmath>
#include <stdexcept>

#include "motisim/kernels.hpp"
#include "motisim/linsolve.hpp"

namespace motisim {

Field helmholtz_solve(const Field& f) {
  LinearSolveStats stats;
  Field w = solve_shifted_helmholtz(*f.grid, 1.0, f, &stats);
  const double scale = kernels::max_abs(f.values);
  // 1e-11 relative to the data, plus the representation floor: storing the
  // solution in double perturbs the residual by O(eps ||A|| ||x||), which
  // dominates the relative term once ||A|| ~ 1/h^2 exceeds ~1e5.
  const double tol = 1e-11 * std::max(scale, 1.0) + 8.0 * stats.round_off_floor;
  if (stats.residual_inf > tol)
    throw std::runtime_error("helmholtz solve residual above tolerance");
  return w;
}

Field gamma_of(const Field& v, const Motility& m) {
  Field g(*v.grid);
  const double lo = m.floor_s();
  for (std::size_t i = 0; i < v.size(); ++i)
    g[i] = m(std::max(v[i], lo));
  return g;
}

namespace {

// Clamp round-off negatives; anything below the tolerance is a real failure.
void enforce_positivity(Field& f, const char* what) {
  const double scale = std::max(kernels::max_abs(f.values), 1.0);
  const double lo = kernels::min_value(f.values);
  if (lo < -1e-10 * scale)
    throw std::runtime_error(std::string(what) + " positivity violation");
  if (lo < 0.0)
    for (double& x : f.values)
      if (x < 0.0) x = 0.0;
}

}  // namespace

SimState make_state(Field u0, Field v0, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  u0.check_finite("u0");
  v0.check_finite("v0");
  if (kernels::min_value(u0.values) < 0.0 || kernels::min_value(v0.values) < 0.0)
    throw std::invalid_argument("initial data must be non-negative");
  SimState s;
  s.w = helmholtz_solve(u0);
  s.u = std::move(u0);
  s.v = std::move(v0);
  s.tau = tau;
  return s;
}

SimState step(const SimState& state, const Motility& m, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  const Grid& g = *state.u.grid;

  const Field gv = gamma_of(state.v, m);
  SimState next;
  next.u = solve_scaled_diffusion(g, dt, gv, state.u);
  enforce_positivity(next.u, "u");

  // ((tau/dt + 1) I - L) v^{n+1} = (tau/dt) v^n + u^{n+1}
  const double sigma = state.tau / dt + 1.0;
  Field rhs(g);
  for (std::size_t i = 0; i < rhs.size(); ++i)
    rhs[i] = state.tau / dt * state.v[i] + next.u[i];
  next.v = solve_shifted_helmholtz(g, sigma, rhs);
  enforce_positivity(next.v, "v");

  next.w = helmholtz_solve(next.u);
  next.u.check_finite("u");
  next.v.check_finite("v");
  next.t = state.t + dt;
  next.tau = state.tau;
  next.step_index = state.step_index + 1;
  return next;
}

}  // namespace motisim
