// The coupled implicit stepper for
//   u_t = Lap(gamma(v) u),   tau v_t = Lap v - v + u,
// with no-flux boundaries, plus the Helmholtz inversion w = (I - Lap)^{-1} u.
//
// One step: solve (I - dt L diag(gamma(v^n))) u^{n+1} = u^n (implicit in u,
// motility frozen at v^n), then the fully implicit v update driven by u^{n+1},
// then refresh w. Both updates are M-matrix solves, so mass is conserved
// exactly and positivity is preserved.
#pragma once

#include "motisim/grid.hpp"
#include "motisim/motility.hpp"

namespace motisim {

struct SimState {
  Field u;  // cell density
  Field v;  // signal concentration
  Field w;  // (I - Lap)^{-1} u
  double t = 0.0;
  double tau = 1.0;
  long step_index = 0;
};

// w = (I - Lap)^{-1} f. Checks the residual against 1e-11 * ||f||_inf.
Field helmholtz_solve(const Field& f);

// Builds a state from initial data (computes w); requires u0, v0 >= 0.
SimState make_state(Field u0, Field v0, double tau);

// Advances by one time step. Throws std::runtime_error on solver failure or
// a positivity violation beyond -1e-10 (relative to the field scale).
SimState step(const SimState& state, const Motility& m, double dt);

// gamma evaluated nodewise at max(v, floor_s): singular families are
// regularized at the floor, which is the caller-side replacement the
// singular-motility convention calls for.
Field gamma_of(const Field& v, const Motility& m);

}  // namespace motisim
