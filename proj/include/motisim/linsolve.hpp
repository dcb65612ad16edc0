// Linear solvers behind the implicit time stepper.
//
// The 1D grids (interval, radial disk) give tridiagonal M-matrix systems and
// are solved directly (Thomas) with one iterative-refinement pass. The 2D
// rectangle systems are symmetrized by the quadrature weights and solved with
// Jacobi-preconditioned conjugate gradients.
#pragma once

#include <functional>
#include <span>

#include "motisim/grid.hpp"

namespace motisim {

struct LinearSolveStats {
  int iterations = 0;
  double residual_inf = 0.0;  // ||A x - b||_inf of the original system
  // eps * ||A||_inf * ||x||_inf: rounding the solution to double perturbs the
  // residual by this much no matter how the solve is done, so residual checks
  // must allow for it on fine grids (||A||_inf ~ 1/h^2).
  double round_off_floor = 0.0;
};

// Solves (sigma I - L) x = b, sigma > 0. Symmetric positive definite in the
// weighted inner product. Throws std::runtime_error on CG non-convergence.
Field solve_shifted_helmholtz(const Grid& g, double sigma, const Field& b,
                              LinearSolveStats* stats = nullptr);

// Solves (I - dt L diag(gamma_v)) x = b with gamma_v > 0 nodewise: the
// implicit density update. M-matrix, so b >= 0 implies x >= 0 up to round-off.
Field solve_scaled_diffusion(const Grid& g, double dt, const Field& gamma_v,
                             const Field& b, LinearSolveStats* stats = nullptr);

// Conjugate gradients on a caller-supplied SPD operator (used directly by the
// 2D path and exposed for the test-suite oracles).
int conjugate_gradient(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::span<const double> precond_inv_diag, std::span<const double> rhs,
    std::span<double> x, double rel_tol, int max_iter);

}  // namespace motisim
