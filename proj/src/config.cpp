#include "motisim/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>

#include "motisim/io.hpp"
#include "motisim/solver.hpp"

namespace motisim {

namespace {

struct Entry {
  std::string value;
  int line = 0;
};
using Section = std::map<std::string, Entry>;
using IniData = std::map<std::string, Section>;

[[noreturn]] void fail(const std::string& origin, int line,
                       const std::string& msg) {
  throw std::runtime_error(origin + ":" + std::to_string(line) + ": " + msg);
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

IniData parse_ini(const std::string& text, const std::string& origin) {
  IniData data;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#' || t[0] == ';') continue;
    if (t.front() == '[') {
      if (t.back() != ']') fail(origin, lineno, "unterminated section header");
      section = trim(t.substr(1, t.size() - 2));
      if (section.empty()) fail(origin, lineno, "empty section name");
      data[section];
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) fail(origin, lineno, "expected key = value");
    if (section.empty()) fail(origin, lineno, "key outside any section");
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) fail(origin, lineno, "empty key");
    auto [it, inserted] =
        data[section].emplace(key, Entry{trim(t.substr(eq + 1)), lineno});
    if (!inserted) fail(origin, lineno, "duplicate key '" + key + "'");
  }
  return data;
}

// Pulls typed values out of one section, tracking which keys were consumed so
// leftovers can be reported (unknown keys are hard errors).
class SectionReader {
 public:
  SectionReader(const IniData& data, std::string origin, std::string name)
      : origin_(std::move(origin)), name_(std::move(name)) {
    const auto it = data.find(name_);
    if (it != data.end()) section_ = &it->second;
  }

  bool present() const { return section_ != nullptr; }

  std::optional<double> get_optional(const std::string& key) {
    const Entry* e = find(key);
    if (!e) return std::nullopt;
    std::istringstream in(e->value);
    double v = 0.0;
    if (!(in >> v) || !(in >> std::ws).eof())
      fail(origin_, e->line, "cannot parse value for '" + key + "'");
    return v;
  }

  const Entry* find(const std::string& key) {
    if (!section_) return nullptr;
    const auto it = section_->find(key);
    if (it == section_->end()) return nullptr;
    consumed_.push_back(key);
    return &it->second;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    const Entry* e = find(key);
    if (!e) return;
    std::istringstream in(e->value);
    T v{};
    if (!(in >> v) || !(in >> std::ws).eof())
      fail(origin_, e->line, "cannot parse value for '" + key + "'");
    out = v;
  }

  void get(const std::string& key, std::string& out) {
    if (const Entry* e = find(key)) out = e->value;
  }

  void get(const std::string& key, std::filesystem::path& out) {
    if (const Entry* e = find(key)) out = e->value;
  }

  void finish() const {
    if (!section_) return;
    for (const auto& [key, entry] : *section_)
      if (std::find(consumed_.begin(), consumed_.end(), key) == consumed_.end())
        fail(origin_, entry.line, "unknown key '" + key + "' in [" + name_ + "]");
  }

 private:
  const Section* section_ = nullptr;
  std::vector<std::string> consumed_;
  std::string origin_, name_;
};

[[noreturn]] void invalid_field(const std::string& field,
                                const std::string& why) {
  throw std::runtime_error("invalid value for \"" + field + "\": " + why);
}

void require_file(const std::filesystem::path& p, const std::string& field) {
  if (!std::filesystem::exists(p))
    invalid_field(field, "file does not exist: " + p.string());
}

std::string family_token(MotilityFamily f) {
  switch (f) {
    case MotilityFamily::ExpDecay: return "exp-decay";
    case MotilityFamily::Power: return "power";
    case MotilityFamily::Gaussian: return "gaussian";
    case MotilityFamily::DoubleExp: return "double-exp";
    default: return "tabulated";
  }
}

std::string datum_token(InitialDatum d) {
  switch (d) {
    case InitialDatum::Constants: return "constants";
    case InitialDatum::GaussianBump: return "gaussian-bump";
    case InitialDatum::PaperBlowup: return "paper-blowup";
    default: return "from-file";
  }
}

}  // namespace

RunConfig parse_config_text(const std::string& text, const std::string& origin) {
  const IniData ini = parse_ini(text, origin);
  for (const auto& [name, _] : ini)
    if (name != "domain" && name != "motility" && name != "run" &&
        name != "initial" && name != "output" && name != "sweep")
      throw std::runtime_error(origin + ": unknown section [" + name + "]");

  RunConfig cfg;

  {
    SectionReader s(ini, origin, "domain");
    std::string kind = "interval";
    s.get("kind", kind);
    if (kind == "interval") {
      cfg.domain.kind = DomainKind::Interval;
      double length = 1.0;
      int n = 64;
      s.get("length", length);
      s.get("n", n);
      cfg.domain.extent = {length, 1.0};
      cfg.domain.resolution = {n, 1};
    } else if (kind == "disk") {
      cfg.domain.kind = DomainKind::DiskRadial;
      double radius = 1.0;
      int n = 64;
      s.get("radius", radius);
      s.get("n", n);
      cfg.domain.extent = {radius, 1.0};
      cfg.domain.resolution = {n, 1};
    } else if (kind == "rectangle") {
      cfg.domain.kind = DomainKind::Rectangle;
      double lx = 1.0, ly = 1.0;
      int nx = 64, ny = 64;
      s.get("lx", lx);
      s.get("ly", ly);
      s.get("nx", nx);
      s.get("ny", ny);
      cfg.domain.extent = {lx, ly};
      cfg.domain.resolution = {nx, ny};
    } else {
      invalid_field("kind", "expected interval, disk, or rectangle");
    }
    s.finish();
    cfg.domain.validate();
  }

  {
    SectionReader s(ini, origin, "motility");
    std::string family = "exp-decay";
    s.get("family", family);
    if (family == "exp-decay") cfg.family = MotilityFamily::ExpDecay;
    else if (family == "power") cfg.family = MotilityFamily::Power;
    else if (family == "gaussian") cfg.family = MotilityFamily::Gaussian;
    else if (family == "double-exp") cfg.family = MotilityFamily::DoubleExp;
    else if (family == "tabulated") cfg.family = MotilityFamily::Tabulated;
    else invalid_field("family", "unknown motility family '" + family + "'");
    s.get("scale", cfg.motility_scale);
    s.get("k", cfg.motility_k);
    s.get("table", cfg.motility_table);
    cfg.anchor_override = s.get_optional("anchor");
    s.finish();
    if (cfg.family == MotilityFamily::Power && !(cfg.motility_k > 0.0))
      invalid_field("k", "power motility requires k > 0");
    if (!(cfg.motility_scale > 0.0))
      invalid_field("scale", "must be positive");
    if (cfg.family == MotilityFamily::Tabulated) {
      if (cfg.motility_table.empty())
        invalid_field("table", "tabulated motility needs a table file");
      require_file(cfg.motility_table, "table");
    }
  }

  {
    SectionReader s(ini, origin, "run");
    s.get("tau", cfg.tau);
    s.get("dt", cfg.dt);
    s.get("t_end", cfg.t_end);
    s.get("cadence", cfg.cadence);
    s.get("ceiling", cfg.ceiling);
    s.get("snapshot_cadence", cfg.snapshot_cadence);
    s.get("seed", cfg.seed);
    s.finish();
    if (!(cfg.tau > 0.0)) invalid_field("tau", "must be positive");
    if (!(cfg.dt > 0.0)) invalid_field("dt", "must be positive");
    if (cfg.t_end < 0.0) invalid_field("t_end", "must be non-negative");
    if (cfg.t_end > 0.0 && !(cfg.dt < cfg.t_end))
      invalid_field("dt", "must be smaller than t_end");
    if (cfg.cadence < 1) invalid_field("cadence", "must be >= 1");
    if (!(cfg.ceiling > 0.0)) invalid_field("ceiling", "must be positive");
    if (cfg.snapshot_cadence < 0)
      invalid_field("snapshot_cadence", "must be >= 0");
  }

  {
    SectionReader s(ini, origin, "initial");
    std::string datum = "constants";
    s.get("datum", datum);
    if (datum == "constants") cfg.datum = InitialDatum::Constants;
    else if (datum == "gaussian-bump") cfg.datum = InitialDatum::GaussianBump;
    else if (datum == "paper-blowup") cfg.datum = InitialDatum::PaperBlowup;
    else if (datum == "from-file") cfg.datum = InitialDatum::FromFile;
    else invalid_field("datum", "unknown initial datum '" + datum + "'");
    s.get("u_const", cfg.u_const);
    s.get("v_const", cfg.v_const);
    const std::optional<double> mass_opt = s.get_optional("mass");
    const double mass = mass_opt.value_or(1.0);
    double width = 0.1, cx = 0.0, cy = 0.0;
    s.get("width", width);
    s.get("center_x", cx);
    s.get("center_y", cy);
    s.get("lambda", cfg.blowup.lambda);
    s.get("r", cfg.blowup.r);
    s.get("r1", cfg.blowup.r1);
    s.get("u_file", cfg.u_file);
    s.get("v_file", cfg.v_file);
    s.get("perturb", cfg.perturb);
    s.finish();
    cfg.gaussian.mass = mass;
    cfg.gaussian.width = width;
    cfg.gaussian.center = {cx, cy};
    cfg.blowup.mass_target = mass;
    cfg.blowup.center = {cx, cy};
    if (cfg.perturb < 0.0) invalid_field("perturb", "must be >= 0");
    if (cfg.datum == InitialDatum::Constants &&
        (cfg.u_const < 0.0 || cfg.v_const < 0.0))
      invalid_field("u_const", "initial constants must be non-negative");
    if (cfg.datum == InitialDatum::GaussianBump &&
        !(cfg.gaussian.mass > 0.0 && cfg.gaussian.width > 0.0))
      invalid_field("mass", "gaussian bump needs positive mass and width");
    if (cfg.datum == InitialDatum::PaperBlowup && !mass_opt)
      invalid_field("mass", "paper-blowup datum needs a mass");
    if (cfg.datum == InitialDatum::FromFile) {
      if (cfg.u_file.empty() || cfg.v_file.empty())
        invalid_field("u_file", "from-file datum needs u_file and v_file");
      require_file(cfg.u_file, "u_file");
      require_file(cfg.v_file, "v_file");
    }
  }

  {
    SectionReader s(ini, origin, "output");
    s.get("dir", cfg.out_dir);
    s.finish();
  }

  {
    SectionReader s(ini, origin, "sweep");
    if (s.present()) {
      std::string masses;
      s.get("masses", masses);
      std::istringstream in(masses);
      std::string tok;
      while (std::getline(in, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
          std::size_t pos = 0;
          const double m = std::stod(tok, &pos);
          if (pos != tok.size()) throw std::invalid_argument(tok);
          cfg.sweep_masses.push_back(m);
        } catch (const std::exception&) {
          invalid_field("masses", "cannot parse mass '" + tok + "'");
        }
      }
      std::string datum = "gaussian-bump";
      s.get("datum", datum);
      if (datum == "gaussian-bump") cfg.sweep_datum = SweepDatum::GaussianBump;
      else if (datum == "paper-blowup") cfg.sweep_datum = SweepDatum::PaperBlowup;
      else invalid_field("datum", "unknown sweep datum '" + datum + "'");
      s.get("workers", cfg.sweep_workers);
      if (cfg.sweep_workers < 0) invalid_field("workers", "must be >= 0");
    }
    s.finish();
  }

  return cfg;
}

RunConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str(), path.string());
}

std::string config_echo(const RunConfig& cfg) {
  std::ostringstream out;
  const auto num = [](double v) { return io::full_precision(v); };

  out << "[domain]\n";
  switch (cfg.domain.kind) {
    case DomainKind::Interval:
      out << "kind = interval\n"
          << "length = " << num(cfg.domain.extent[0]) << '\n'
          << "n = " << cfg.domain.resolution[0] << '\n';
      break;
    case DomainKind::DiskRadial:
      out << "kind = disk\n"
          << "radius = " << num(cfg.domain.extent[0]) << '\n'
          << "n = " << cfg.domain.resolution[0] << '\n';
      break;
    case DomainKind::Rectangle:
      out << "kind = rectangle\n"
          << "lx = " << num(cfg.domain.extent[0]) << '\n'
          << "ly = " << num(cfg.domain.extent[1]) << '\n'
          << "nx = " << cfg.domain.resolution[0] << '\n'
          << "ny = " << cfg.domain.resolution[1] << '\n';
      break;
  }

  out << "\n[motility]\n"
      << "family = " << family_token(cfg.family) << '\n';
  out << "scale = " << num(cfg.motility_scale) << '\n';
  if (cfg.family == MotilityFamily::Power)
    out << "k = " << num(cfg.motility_k) << '\n';
  if (cfg.family == MotilityFamily::Tabulated)
    out << "table = " << cfg.motility_table.string() << '\n';
  if (cfg.anchor_override)
    out << "anchor = " << num(*cfg.anchor_override) << '\n';

  out << "\n[run]\n"
      << "tau = " << num(cfg.tau) << '\n'
      << "dt = " << num(cfg.dt) << '\n'
      << "t_end = " << num(cfg.t_end) << '\n'
      << "cadence = " << cfg.cadence << '\n'
      << "ceiling = " << num(cfg.ceiling) << '\n'
      << "snapshot_cadence = " << cfg.snapshot_cadence << '\n'
      << "seed = " << cfg.seed << '\n';

  out << "\n[initial]\n"
      << "datum = " << datum_token(cfg.datum) << '\n';
  switch (cfg.datum) {
    case InitialDatum::Constants:
      out << "u_const = " << num(cfg.u_const) << '\n'
          << "v_const = " << num(cfg.v_const) << '\n';
      break;
    case InitialDatum::GaussianBump:
      out << "mass = " << num(cfg.gaussian.mass) << '\n'
          << "width = " << num(cfg.gaussian.width) << '\n'
          << "center_x = " << num(cfg.gaussian.center[0]) << '\n'
          << "center_y = " << num(cfg.gaussian.center[1]) << '\n';
      break;
    case InitialDatum::PaperBlowup:
      out << "mass = " << num(cfg.blowup.mass_target) << '\n'
          << "lambda = " << num(cfg.blowup.lambda) << '\n'
          << "r = " << num(cfg.blowup.r) << '\n'
          << "r1 = " << num(cfg.blowup.r1) << '\n'
          << "center_x = " << num(cfg.blowup.center[0]) << '\n'
          << "center_y = " << num(cfg.blowup.center[1]) << '\n';
      break;
    case InitialDatum::FromFile:
      out << "u_file = " << cfg.u_file.string() << '\n'
          << "v_file = " << cfg.v_file.string() << '\n';
      break;
  }
  if (cfg.perturb > 0.0) out << "perturb = " << num(cfg.perturb) << '\n';

  if (!cfg.out_dir.empty())
    out << "\n[output]\ndir = " << cfg.out_dir.string() << '\n';

  if (!cfg.sweep_masses.empty()) {
    out << "\n[sweep]\nmasses = ";
    for (std::size_t i = 0; i < cfg.sweep_masses.size(); ++i)
      out << (i ? ", " : "") << num(cfg.sweep_masses[i]);
    out << '\n'
        << "datum = "
        << (cfg.sweep_datum == SweepDatum::PaperBlowup ? "paper-blowup"
                                                       : "gaussian-bump")
        << '\n'
        << "workers = " << cfg.sweep_workers << '\n';
  }
  return out.str();
}

Motility make_motility(const RunConfig& cfg) {
  Motility m = [&] {
    switch (cfg.family) {
      case MotilityFamily::ExpDecay: return Motility::exp_decay(cfg.motility_scale);
      case MotilityFamily::Power: return Motility::power(cfg.motility_k);
      case MotilityFamily::Gaussian: return Motility::gaussian(cfg.motility_scale);
      case MotilityFamily::DoubleExp: return Motility::double_exp(cfg.motility_scale);
      default: return Motility::tabulated_from_csv(cfg.motility_table);
    }
  }();
  if (cfg.anchor_override) m.set_anchor(*cfg.anchor_override);
  return m;
}

std::pair<Field, Field> make_initial_data(const RunConfig& cfg, const Grid& g) {
  Field u0(g), v0(g);
  switch (cfg.datum) {
    case InitialDatum::Constants:
      u0 = Field(g, cfg.u_const);
      v0 = Field(g, cfg.v_const);
      break;
    case InitialDatum::GaussianBump: {
      BlowupDatum d = gaussian_bump_datum(cfg.gaussian, g);
      u0 = std::move(d.u0);
      v0 = std::move(d.v0);
      break;
    }
    case InitialDatum::PaperBlowup: {
      BlowupDatum d = blowup_datum(cfg.blowup, g);
      u0 = std::move(d.u0);
      v0 = std::move(d.v0);
      break;
    }
    case InitialDatum::FromFile:
      u0 = read_field_csv(g, cfg.u_file);
      v0 = read_field_csv(g, cfg.v_file);
      break;
  }
  if (cfg.perturb > 0.0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    for (double& x : u0.values) x = std::max(0.0, x * (1.0 + cfg.perturb * noise(rng)));
  }
  return {std::move(u0), std::move(v0)};
}

}  // namespace motisim
