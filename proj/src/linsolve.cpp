#include "motisim/linsolve.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "motisim/kernels.hpp"

namespace motisim {

namespace {

struct Tridiag {
  std::vector<double> dl, d, du;  // sub, main, super

  void apply(std::span<const double> x, std::span<double> y) const {
    const std::size_t n = d.size();
    for (std::size_t i = 0; i < n; ++i) {
      double acc = d[i] * x[i];
      if (i > 0) acc += dl[i] * x[i - 1];
      if (i + 1 < n) acc += du[i] * x[i + 1];
      y[i] = acc;
    }
  }

  // Thomas algorithm; safe without pivoting for these diagonally dominant
  // M-matrix systems.
  std::vector<double> solve(std::span<const double> b) const {
    const std::size_t n = d.size();
    std::vector<double> c(n), x(n);
    double denom = d[0];
    c[0] = du[0] / denom;
    x[0] = b[0] / denom;
    for (std::size_t i = 1; i < n; ++i) {
      denom = d[i] - dl[i] * c[i - 1];
      c[i] = du[i] / denom;
      x[i] = (b[i] - dl[i] * x[i - 1]) / denom;
    }
    for (std::size_t i = n - 1; i-- > 0;) x[i] -= c[i] * x[i + 1];
    return x;
  }

  // direct solve plus iterative refinement against a caller-supplied residual
  // (the flux-form one: evaluating the assembled rows instead would leave
  // eps/h^2 round-off noise that no refinement can remove)
  template <typename Residual>
  std::vector<double> solve_refined(std::span<const double> b,
                                    const Residual& residual,
                                    LinearSolveStats* stats) const {
    std::vector<double> x = solve(b);
    const std::size_t n = d.size();
    int passes = 0;
    for (; passes < 3; ++passes) {
      const std::vector<double> r = residual(x);
      if (kernels::max_abs(r) <= 1e-13 * std::max(1.0, kernels::max_abs(b)))
        break;
      const std::vector<double> e = solve(r);
      for (std::size_t i = 0; i < n; ++i) x[i] += e[i];
    }
    if (stats) {
      stats->iterations = passes;
      stats->residual_inf = kernels::max_abs(residual(x));
      stats->round_off_floor =
          std::numeric_limits<double>::epsilon() * row_norm() * kernels::max_abs(x);
    }
    return x;
  }

  double row_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
      m = std::max(m, std::abs(dl[i]) + std::abs(d[i]) + std::abs(du[i]));
    return m;
  }
};

// Assembles sigma I - L for a 1D grid.
Tridiag tridiag_shifted(const Grid& g, double sigma) {
  const std::size_t n = static_cast<std::size_t>(g.size());
  Tridiag t;
  t.dl.assign(n, 0.0);
  t.d.assign(n, sigma);
  t.du.assign(n, 0.0);
  for (const Face& f : g.faces) {
    t.d[f.left] += f.trans / g.weights[f.left];
    t.d[f.right] += f.trans / g.weights[f.right];
    t.du[f.left] = -f.trans / g.weights[f.left];
    t.dl[f.right] = -f.trans / g.weights[f.right];
  }
  return t;
}

// Assembles I - dt L diag(gamma_v) for a 1D grid.
Tridiag tridiag_scaled(const Grid& g, double dt, const Field& gamma_v) {
  const std::size_t n = static_cast<std::size_t>(g.size());
  Tridiag t;
  t.dl.assign(n, 0.0);
  t.d.assign(n, 1.0);
  t.du.assign(n, 0.0);
  for (const Face& f : g.faces) {
    t.d[f.left] += dt * f.trans / g.weights[f.left] * gamma_v[f.left];
    t.d[f.right] += dt * f.trans / g.weights[f.right] * gamma_v[f.right];
    t.du[f.left] = -dt * f.trans / g.weights[f.left] * gamma_v[f.right];
    t.dl[f.right] = -dt * f.trans / g.weights[f.right] * gamma_v[f.left];
  }
  return t;
}

// b - (sigma x - L x), with L applied in flux form (differences first): the
// round-off then scales with the actual face jumps, not with 1/h^2.
std::vector<double> residual_shifted(const Grid& g, double sigma,
                                     std::span<const double> b,
                                     std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> acc(n, 0.0);
  for (const Face& f : g.faces) {
    const double flux = f.trans * (x[f.right] - x[f.left]);
    acc[f.left] += flux;
    acc[f.right] -= flux;
  }
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - sigma * x[i] + acc[i] / g.weights[i];
  return r;
}

// b - (x - dt L (gamma .* x)), flux form again
std::vector<double> residual_scaled(const Grid& g, double dt,
                                    const Field& gamma_v,
                                    std::span<const double> b,
                                    std::span<const double> x) {
  const std::size_t n = x.size();
  std::vector<double> acc(n, 0.0);
  for (const Face& f : g.faces) {
    const double flux =
        f.trans * (gamma_v[f.right] * x[f.right] - gamma_v[f.left] * x[f.left]);
    acc[f.left] += flux;
    acc[f.right] -= flux;
  }
  std::vector<double> r(n);
  for (std::size_t i = 0; i < n; ++i)
    r[i] = b[i] - x[i] + dt * acc[i] / g.weights[i];
  return r;
}

}  // namespace

int conjugate_gradient(
    const std::function<void(std::span<const double>, std::span<double>)>& apply,
    std::span<const double> precond_inv_diag, std::span<const double> rhs,
    std::span<double> x, double rel_tol, int max_iter) {
  const std::size_t n = rhs.size();
  std::vector<double> r(n), z(n), p(n), q(n);
  apply(x, q);
  for (std::size_t i = 0; i < n; ++i) r[i] = rhs[i] - q[i];
  kernels::hadamard(precond_inv_diag, r, z);
  std::copy(z.begin(), z.end(), p.begin());
  double rz = kernels::dot(r, z);
  const double bnorm = std::sqrt(kernels::dot(rhs, rhs));
  const double stop = rel_tol * (bnorm > 0 ? bnorm : 1.0);
  int it = 0;
  for (; it < max_iter; ++it) {
    if (std::sqrt(kernels::dot(r, r)) <= stop) break;
    apply(p, q);
    const double alpha = rz / kernels::dot(p, q);
    kernels::axpby(alpha, p, 1.0, x);
    kernels::axpby(-alpha, q, 1.0, r);
    kernels::hadamard(precond_inv_diag, r, z);
    const double rz_new = kernels::dot(r, z);
    kernels::axpby(1.0, z, rz_new / rz, p);
    rz = rz_new;
  }
  if (it == max_iter) throw std::runtime_error("conjugate gradient did not converge");
  return it;
}

Field solve_shifted_helmholtz(const Grid& g, double sigma, const Field& b,
                              LinearSolveStats* stats) {
  Field x(g);
  if (g.is_1d()) {
    x.values = tridiag_shifted(g, sigma).solve_refined(
        b.values,
        [&](std::span<const double> y) {
          return residual_shifted(g, sigma, b.values, y);
        },
        stats);
    return x;
  }
  const std::size_t n = b.size();
  // Symmetrize by the weights: (sigma W - W L) x = W b.
  std::vector<double> wb(n), inv_diag(n), lap_diag(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = g.lap_row_ptr[i]; k < g.lap_row_ptr[i + 1]; ++k)
      if (g.lap_col_idx[k] == static_cast<int>(i)) lap_diag[i] = g.lap_values[k];
  for (std::size_t i = 0; i < n; ++i) {
    wb[i] = g.weights[i] * b.values[i];
    inv_diag[i] = 1.0 / (g.weights[i] * (sigma - lap_diag[i]));
  }
  std::vector<double> tmp(n);
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    kernels::csr_matvec(g.lap_row_ptr, g.lap_col_idx, g.lap_values, in, tmp);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = g.weights[i] * (sigma * in[i] - tmp[i]);
  };
  const int it =
      conjugate_gradient(apply, inv_diag, wb, x.values, 1e-13, 100 * static_cast<int>(n));
  if (stats) {
    stats->iterations = it;
    stats->residual_inf =
        kernels::max_abs(residual_shifted(g, sigma, b.values, x.values));
    double row_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = sigma;
      for (int k = g.lap_row_ptr[i]; k < g.lap_row_ptr[i + 1]; ++k)
        acc += std::abs(g.lap_values[k]);
      row_norm = std::max(row_norm, acc);
    }
    stats->round_off_floor = std::numeric_limits<double>::epsilon() * row_norm *
                             kernels::max_abs(x.values);
  }
  return x;
}

Field solve_scaled_diffusion(const Grid& g, double dt, const Field& gamma_v,
                             const Field& b, LinearSolveStats* stats) {
  Field x(g);
  if (g.is_1d()) {
    x.values = tridiag_scaled(g, dt, gamma_v).solve_refined(
        b.values,
        [&](std::span<const double> y) {
          return residual_scaled(g, dt, gamma_v, b.values, y);
        },
        stats);
    return x;
  }
  const std::size_t n = b.size();
  // Substitute z = diag(gamma) x: (W diag(1/gamma) - dt W L) z = W b is SPD.
  std::vector<double> wb(n), inv_diag(n), lap_diag(n, 0.0), z(n, 0.0), tmp(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int k = g.lap_row_ptr[i]; k < g.lap_row_ptr[i + 1]; ++k)
      if (g.lap_col_idx[k] == static_cast<int>(i)) lap_diag[i] = g.lap_values[k];
  for (std::size_t i = 0; i < n; ++i) {
    wb[i] = g.weights[i] * b.values[i];
    inv_diag[i] =
        1.0 / (g.weights[i] * (1.0 / gamma_v[i] - dt * lap_diag[i]));
    z[i] = gamma_v[i] * b.values[i];  // warm start from x = b
  }
  auto apply = [&](std::span<const double> in, std::span<double> out) {
    kernels::csr_matvec(g.lap_row_ptr, g.lap_col_idx, g.lap_values, in, tmp);
    for (std::size_t i = 0; i < n; ++i)
      out[i] = g.weights[i] * (in[i] / gamma_v[i] - dt * tmp[i]);
  };
  const int it =
      conjugate_gradient(apply, inv_diag, wb, z, 1e-13, 100 * static_cast<int>(n));
  for (std::size_t i = 0; i < n; ++i) x.values[i] = z[i] / gamma_v[i];
  if (stats) {
    stats->iterations = it;
    stats->residual_inf =
        kernels::max_abs(residual_scaled(g, dt, gamma_v, b.values, x.values));
    double row_norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 1.0;
      for (int k = g.lap_row_ptr[i]; k < g.lap_row_ptr[i + 1]; ++k)
        acc += dt * std::abs(g.lap_values[k]) * gamma_v[g.lap_col_idx[k]];
      row_norm = std::max(row_norm, acc);
    }
    stats->round_off_floor = std::numeric_limits<double>::epsilon() * row_norm *
                             kernels::max_abs(x.values);
  }
  return x;
}

}  // namespace motisim
