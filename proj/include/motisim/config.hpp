// Sectioned key = value run configuration: hand-writable, diffable, and
// echoed back canonically so a run directory pins down its exact inputs.
#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "motisim/experiments.hpp"
#include "motisim/grid.hpp"
#include "motisim/motility.hpp"

namespace motisim {

enum class InitialDatum { Constants, GaussianBump, PaperBlowup, FromFile };

struct RunConfig {
  DomainSpec domain;

  MotilityFamily family = MotilityFamily::ExpDecay;
  double motility_scale = 1.0;
  double motility_k = 1.0;                 // power family exponent
  std::filesystem::path motility_table;    // tabulated family
  std::optional<double> anchor_override;

  double tau = 1.0;
  double dt = 1e-3;
  double t_end = 1.0;
  int cadence = 10;
  double ceiling = 1e8;
  int snapshot_cadence = 0;
  unsigned long seed = 0;

  InitialDatum datum = InitialDatum::Constants;
  double u_const = 1.0, v_const = 1.0;
  GaussianBumpParams gaussian;
  BlowupDatumParams blowup;
  std::filesystem::path u_file, v_file;
  double perturb = 0.0;  // relative random perturbation of u0

  std::filesystem::path out_dir;

  // sweep subcommand only
  std::vector<double> sweep_masses;
  SweepDatum sweep_datum = SweepDatum::GaussianBump;
  int sweep_workers = 0;
};

// Parses and fully validates. Unknown keys and sections are hard errors with
// line numbers; semantic violations name the offending field.
RunConfig parse_config(const std::filesystem::path& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);

// Canonical text: fixed section and key order, 17-digit floats. Re-parses to
// an equivalent config; its hash identifies the run in every output file.
std::string config_echo(const RunConfig& cfg);

Motility make_motility(const RunConfig& cfg);
// Builds (u0, v0) on the grid, applying the seeded perturbation when asked.
std::pair<Field, Field> make_initial_data(const RunConfig& cfg, const Grid& g);

}  // namespace motisim
