// Cell-centered finite-volume grids with Neumann (no-flux) boundaries.
//
// Three domain kinds: a 1D interval, a radially reduced disk, and a 2D
// rectangle. Quadrature weights are the cell volumes (midpoint rule), so the
// weights sum to |Omega| exactly and the flux-form Laplacian integrates to
// zero on every field.
#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

namespace motisim {

enum class DomainKind { Interval, DiskRadial, Rectangle };

struct DomainSpec {
  DomainKind kind = DomainKind::Interval;
  // Interval: extent[0] = length. DiskRadial: extent[0] = radius.
  // Rectangle: extent = {lx, ly}.
  std::array<double, 2> extent{1.0, 1.0};
  // Cells per axis; resolution[1] is unused for the 1D kinds.
  std::array<int, 2> resolution{64, 64};

  int axes() const { return kind == DomainKind::Rectangle ? 2 : 1; }
  double measure() const;
  // Throws std::invalid_argument on resolution < 8 or non-positive extent.
  void validate() const;
};

// Interior face between cells `left` and `right`. `trans` is the flux
// coefficient A_f/h; the discrete Green identity
//   -<f, Lf>_w = sum_f trans * (f_right - f_left)^2
// holds exactly by construction.
struct Face {
  int left = 0;
  int right = 0;
  double trans = 0.0;
  double spacing = 0.0;  // distance between the two cell centers
};

struct Grid {
  DomainSpec domain;
  std::vector<std::array<double, 2>> nodes;  // cell centers; [1] unused in 1D
  std::vector<double> weights;               // cell volumes
  std::vector<Face> faces;

  // CSR of the Neumann Laplacian L (rows scaled by 1/weights; symmetric in
  // the weighted inner product).
  std::vector<int> lap_row_ptr;
  std::vector<int> lap_col_idx;
  std::vector<double> lap_values;

  int size() const { return static_cast<int>(weights.size()); }
  double measure() const { return domain.measure(); }
  bool is_1d() const { return domain.kind != DomainKind::Rectangle; }
};

struct Field {
  const Grid* grid = nullptr;
  std::vector<double> values;

  Field() = default;
  explicit Field(const Grid& g, double fill = 0.0)
      : grid(&g), values(static_cast<std::size_t>(g.size()), fill) {}

  double& operator[](std::size_t i) { return values[i]; }
  double operator[](std::size_t i) const { return values[i]; }
  std::size_t size() const { return values.size(); }
  // Throws std::runtime_error if any value is NaN or infinite.
  void check_finite(const std::string& what) const;
};

Grid build_grid(const DomainSpec& spec);

Field apply_laplacian(const Field& f);
double integrate(const Field& f);
// int |grad f|^2 by face-centered differences; equals -int f * lap(f) to
// round-off.
double grad_norm_sq(const Field& f);

double field_max(const Field& f);
double field_min(const Field& f);
double max_abs_diff(const Field& a, const Field& b);

// Snapshot export/import: CSV with header `coord...,value`, one node per row,
// nodes in lexicographic axis order (the construction order).
void write_field_csv(const Field& f, const std::filesystem::path& path);
// Reads the value column of a snapshot written for the same grid.
Field read_field_csv(const Grid& g, const std::filesystem::path& path);

}  // namespace motisim
