#include "motisim/grid.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "motisim/io.hpp"
#include "motisim/kernels.hpp"

namespace motisim {

double DomainSpec::measure() const {
  switch (kind) {
    case DomainKind::Interval:
      return extent[0];
    case DomainKind::DiskRadial:
      return std::numbers::pi * extent[0] * extent[0];
    case DomainKind::Rectangle:
      return extent[0] * extent[1];
  }
  return 0.0;
}

void DomainSpec::validate() const {
  for (int a = 0; a < axes(); ++a) {
    if (resolution[a] < 8)
      throw std::invalid_argument("DomainSpec: resolution must be >= 8 per axis");
    if (!(extent[a] > 0.0))
      throw std::invalid_argument("DomainSpec: extent must be strictly positive");
  }
}

void Field::check_finite(const std::string& what) const {
  for (double v : values)
    if (!std::isfinite(v))
      throw std::runtime_error("non-finite value in field: " + what);
}

namespace {

void assemble_laplacian(Grid& g) {
  const int n = g.size();
  std::vector<std::vector<std::pair<int, double>>> rows(n);
  for (const Face& f : g.faces) {
    // Row form of u_t = div(flux): L_ij = trans/w_i off-diagonal.
    rows[f.left].push_back({f.right, f.trans / g.weights[f.left]});
    rows[f.left].push_back({f.left, -f.trans / g.weights[f.left]});
    rows[f.right].push_back({f.left, f.trans / g.weights[f.right]});
    rows[f.right].push_back({f.right, -f.trans / g.weights[f.right]});
  }
  g.lap_row_ptr.assign(1, 0);
  for (int i = 0; i < n; ++i) {
    // merge duplicate column entries, keep columns sorted
    std::sort(rows[i].begin(), rows[i].end());
    int prev = -1;
    for (auto [j, v] : rows[i]) {
      if (j == prev) {
        g.lap_values.back() += v;
      } else {
        g.lap_col_idx.push_back(j);
        g.lap_values.push_back(v);
        prev = j;
      }
    }
    g.lap_row_ptr.push_back(static_cast<int>(g.lap_col_idx.size()));
  }
}

}  // namespace

Grid build_grid(const DomainSpec& spec) {
  spec.validate();
  Grid g;
  g.domain = spec;
  switch (spec.kind) {
    case DomainKind::Interval: {
      const int n = spec.resolution[0];
      const double h = spec.extent[0] / n;
      for (int i = 0; i < n; ++i) {
        g.nodes.push_back({(i + 0.5) * h, 0.0});
        g.weights.push_back(h);
      }
      for (int i = 0; i + 1 < n; ++i) g.faces.push_back({i, i + 1, 1.0 / h, h});
      break;
    }
    case DomainKind::DiskRadial: {
      // Conservative radial form (1/r)(r f_r)_r; the r=0 face has zero area,
      // so no flux condition is needed at the axis.
      const int n = spec.resolution[0];
      const double h = spec.extent[0] / n;
      for (int i = 0; i < n; ++i) {
        const double r = (i + 0.5) * h;
        g.nodes.push_back({r, 0.0});
        g.weights.push_back(2.0 * std::numbers::pi * r * h);
      }
      for (int i = 0; i + 1 < n; ++i) {
        const double r_face = (i + 1) * h;
        g.faces.push_back({i, i + 1, 2.0 * std::numbers::pi * r_face / h, h});
      }
      break;
    }
    case DomainKind::Rectangle: {
      const int nx = spec.resolution[0], ny = spec.resolution[1];
      const double hx = spec.extent[0] / nx, hy = spec.extent[1] / ny;
      // lexicographic by axis index: x fastest
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
          g.nodes.push_back({(i + 0.5) * hx, (j + 0.5) * hy});
          g.weights.push_back(hx * hy);
        }
      auto id = [nx](int i, int j) { return j * nx + i; };
      for (int j = 0; j < ny; ++j)
        for (int i = 0; i + 1 < nx; ++i)
          g.faces.push_back({id(i, j), id(i + 1, j), hy / hx, hx});
      for (int j = 0; j + 1 < ny; ++j)
        for (int i = 0; i < nx; ++i)
          g.faces.push_back({id(i, j), id(i, j + 1), hx / hy, hy});
      break;
    }
  }
  assemble_laplacian(g);
  return g;
}

Field apply_laplacian(const Field& f) {
  // flux form rather than the CSR matvec: taking the face differences first
  // keeps the round-off proportional to the actual jumps (a constant field
  // maps to exactly zero), where the assembled rows would leave eps/h^2 noise
  const Grid& g = *f.grid;
  Field out(g);
  for (const Face& fc : g.faces) {
    const double flux = fc.trans * (f[fc.right] - f[fc.left]);
    out[fc.left] += flux / g.weights[fc.left];
    out[fc.right] -= flux / g.weights[fc.right];
  }
  return out;
}

double integrate(const Field& f) {
  return kernels::weighted_sum(f.grid->weights, f.values);
}

double grad_norm_sq(const Field& f) {
  double acc = 0.0;
  for (const Face& face : f.grid->faces) {
    const double d = f.values[face.right] - f.values[face.left];
    acc += face.trans * d * d;
  }
  return acc;
}

double field_max(const Field& f) { return kernels::max_value(f.values); }
double field_min(const Field& f) { return kernels::min_value(f.values); }

double max_abs_diff(const Field& a, const Field& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    acc = std::max(acc, std::abs(a.values[i] - b.values[i]));
  return acc;
}

void write_field_csv(const Field& f, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string());
  const Grid& g = *f.grid;
  if (g.domain.kind == DomainKind::Rectangle)
    out << "x,y,value\n";
  else if (g.domain.kind == DomainKind::DiskRadial)
    out << "r,value\n";
  else
    out << "x,value\n";
  for (int i = 0; i < g.size(); ++i) {
    out << io::full_precision(g.nodes[i][0]);
    if (g.domain.kind == DomainKind::Rectangle)
      out << ',' << io::full_precision(g.nodes[i][1]);
    out << ',' << io::full_precision(f.values[i]) << '\n';
  }
}

Field read_field_csv(const Grid& g, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  std::getline(in, line);  // header
  Field f(g);
  for (int i = 0; i < g.size(); ++i) {
    if (!std::getline(in, line))
      throw std::runtime_error("snapshot too short: " + path.string());
    const auto pos = line.rfind(',');
    f.values[i] = std::stod(line.substr(pos + 1));
  }
  return f;
}

}  // namespace motisim
