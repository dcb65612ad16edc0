#include "motisim/motility.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace motisim {

namespace {

double adaptive_simpson(const auto& f, double a, double b, double tol) {
  auto simpson = [&](double lo, double hi) {
    return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
  };
  // recursive refinement with Richardson acceptance
  auto rec = [&](auto&& self, double lo, double hi, double whole, double eps,
                 int depth) -> double {
    const double mid = 0.5 * (lo + hi);
    const double left = simpson(lo, mid), right = simpson(mid, hi);
    if (depth > 40 || std::abs(left + right - whole) <= 15.0 * eps)
      return left + right + (left + right - whole) / 15.0;
    return self(self, lo, mid, left, eps / 2, depth + 1) +
           self(self, mid, hi, right, eps / 2, depth + 1);
  };
  if (a == b) return 0.0;
  return rec(rec, a, b, simpson(a, b), tol, 0);
}

}  // namespace

Motility Motility::exp_decay(double scale) {
  Motility m;
  m.family_ = MotilityFamily::ExpDecay;
  m.scale_ = scale;
  return m;
}

Motility Motility::power(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("power motility requires k > 0");
  Motility m;
  m.family_ = MotilityFamily::Power;
  m.k_ = k;
  m.floor_s_ = 1e-8;  // singular at s = 0; callers regularize via floor_s
  return m;
}

Motility Motility::gaussian(double scale) {
  Motility m;
  m.family_ = MotilityFamily::Gaussian;
  m.scale_ = scale;
  return m;
}

Motility Motility::double_exp(double scale) {
  Motility m;
  m.family_ = MotilityFamily::DoubleExp;
  m.scale_ = scale;
  return m;
}

Motility Motility::tabulated(std::vector<double> s, std::vector<double> gamma) {
  if (s.size() != gamma.size() || s.size() < 2)
    throw std::invalid_argument("tabulated motility needs >= 2 samples");
  for (std::size_t i = 0; i + 1 < s.size(); ++i)
    if (!(s[i] < s[i + 1]))
      throw std::invalid_argument("tabulated motility: s must be strictly increasing");
  for (double g : gamma)
    if (!(g > 0.0))
      throw std::invalid_argument("tabulated motility: gamma must be positive");
  Motility m;
  m.family_ = MotilityFamily::Tabulated;
  m.tab_s_ = std::move(s);
  m.tab_g_ = std::move(gamma);
  return m;
}

Motility Motility::tabulated_from_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open motility table " + path.string());
  std::vector<double> s, g;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a, b;
    if (row >> a >> b) {
      s.push_back(a);
      g.push_back(b);
    } else if (!s.empty()) {
      throw std::runtime_error("malformed motility table row: " + line);
    }
    // non-numeric first line is treated as a header
  }
  return tabulated(std::move(s), std::move(g));
}

std::string Motility::family_name() const {
  switch (family_) {
    case MotilityFamily::ExpDecay: return "exp-decay";
    case MotilityFamily::Power: return "power";
    case MotilityFamily::Gaussian: return "gaussian";
    case MotilityFamily::DoubleExp: return "double-exp";
    case MotilityFamily::Tabulated: return "tabulated";
  }
  return "?";
}

double Motility::tab_eval(double s) const {
  if (s <= tab_s_.front()) return tab_g_.front();
  if (s >= tab_s_.back()) return tab_g_.back();
  const auto it = std::upper_bound(tab_s_.begin(), tab_s_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - tab_s_.begin());
  const double t = (s - tab_s_[j - 1]) / (tab_s_[j] - tab_s_[j - 1]);
  return (1.0 - t) * tab_g_[j - 1] + t * tab_g_[j];
}

double Motility::tab_d1(double s) const {
  if (s <= tab_s_.front() || s >= tab_s_.back()) return 0.0;
  const auto it = std::upper_bound(tab_s_.begin(), tab_s_.end(), s);
  const std::size_t j = static_cast<std::size_t>(it - tab_s_.begin());
  return (tab_g_[j] - tab_g_[j - 1]) / (tab_s_[j] - tab_s_[j - 1]);
}

double Motility::operator()(double s) const {
  if (s < floor_s_)
    throw std::domain_error("motility evaluated below floor_s");
  switch (family_) {
    case MotilityFamily::ExpDecay: return std::exp(-s / scale_);
    case MotilityFamily::Power: return std::pow(s, -k_);
    case MotilityFamily::Gaussian: {
      const double t = s / scale_;
      return std::exp(-t * t);
    }
    case MotilityFamily::DoubleExp: return std::exp(-std::exp(s / scale_));
    case MotilityFamily::Tabulated: return tab_eval(s);
  }
  return 0.0;
}

double Motility::d1(double s) const {
  if (s < floor_s_)
    throw std::domain_error("motility evaluated below floor_s");
  switch (family_) {
    case MotilityFamily::ExpDecay: return -std::exp(-s / scale_) / scale_;
    case MotilityFamily::Power: return -k_ * std::pow(s, -k_ - 1.0);
    case MotilityFamily::Gaussian: {
      const double t = s / scale_;
      return -2.0 * t / scale_ * std::exp(-t * t);
    }
    case MotilityFamily::DoubleExp: {
      const double e = std::exp(s / scale_);
      return -e / scale_ * std::exp(-e);
    }
    case MotilityFamily::Tabulated: return tab_d1(s);
  }
  return 0.0;
}

double Motility::d2(double s) const {
  if (s < floor_s_)
    throw std::domain_error("motility evaluated below floor_s");
  switch (family_) {
    case MotilityFamily::ExpDecay:
      return std::exp(-s / scale_) / (scale_ * scale_);
    case MotilityFamily::Power:
      return k_ * (k_ + 1.0) * std::pow(s, -k_ - 2.0);
    case MotilityFamily::Gaussian: {
      const double t = s / scale_;
      return (4.0 * t * t - 2.0) / (scale_ * scale_) * std::exp(-t * t);
    }
    case MotilityFamily::DoubleExp: {
      const double e = std::exp(s / scale_);
      return (e * e - e) / (scale_ * scale_) * std::exp(-e);
    }
    case MotilityFamily::Tabulated:
      throw std::logic_error("tabulated motility has no second derivative");
  }
  return 0.0;
}

double Motility::anchor() const {
  if (!anchor_) throw std::logic_error("motility anchor not set");
  return *anchor_;
}

double Motility::choose_anchor(double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  const double target = 1.0 / (2.0 * tau);
  double lo = floor_s_;
  if ((*this)(lo) <= target) {
    anchor_ = lo;
    return lo;
  }
  double hi = std::max({1.0, scale_, 2.0 * lo});
  const double ceiling = 1e9 * std::max(1.0, scale_);
  while ((*this)(hi) > target) {
    hi *= 2.0;
    if (hi > ceiling)
      throw std::runtime_error(
          "choose_anchor: gamma never drops below 1/(2 tau); (A1) violated");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if ((*this)(mid) > target)
      lo = mid;
    else
      hi = mid;
  }
  anchor_ = hi;
  return hi;
}

double Motility::big_gamma(double s) const {
  const double a = anchor();
  if (s < floor_s_)
    throw std::domain_error("big_gamma evaluated below floor_s");
  switch (family_) {
    case MotilityFamily::ExpDecay:
      return scale_ * (std::exp(-a / scale_) - std::exp(-s / scale_));
    case MotilityFamily::Power:
      if (k_ == 1.0) return std::log(s / a);
      return (std::pow(a, 1.0 - k_) - std::pow(s, 1.0 - k_)) / (k_ - 1.0);
    case MotilityFamily::Gaussian:
      return scale_ * 0.5 * std::sqrt(std::numbers::pi) *
             (std::erf(s / scale_) - std::erf(a / scale_));
    case MotilityFamily::DoubleExp:
      return adaptive_simpson([&](double x) { return (*this)(x); }, a, s, 1e-10);
    case MotilityFamily::Tabulated: {
      // exact integral of the piecewise-linear interpolant
      auto seg = [&](double lo, double hi) {
        return 0.5 * (tab_eval(lo) + tab_eval(hi)) * (hi - lo);
      };
      const double sign = s >= a ? 1.0 : -1.0;
      double lo = std::min(a, s), hi = std::max(a, s);
      double acc = 0.0, cur = lo;
      for (std::size_t j = 0; j < tab_s_.size(); ++j) {
        if (tab_s_[j] <= cur) continue;
        if (tab_s_[j] >= hi) break;
        acc += seg(cur, tab_s_[j]);
        cur = tab_s_[j];
      }
      acc += seg(cur, hi);
      return sign * acc;
    }
  }
  return 0.0;
}

AssumptionReport Motility::check_assumptions(double s_max, int samples) const {
  if (samples < 100) throw std::invalid_argument("check_assumptions: samples >= 100");
  AssumptionReport rep;
  const double s_lo = std::max(floor_s_, 1e-4 * std::max(1.0, scale_));
  std::vector<double> lattice(static_cast<std::size_t>(samples));
  const double lr = std::log(s_max / s_lo);
  for (int i = 0; i < samples; ++i)
    lattice[static_cast<std::size_t>(i)] =
        s_lo * std::exp(lr * i / (samples - 1.0));

  // A0: positive and non-increasing on the lattice (underflow to +0 at the
  // far tail of the steep families is not a sign change).
  rep.a0 = (*this)(s_lo) > 0.0;
  for (double s : lattice) {
    const double g = (*this)(s);
    if (g < 0.0 || !(d1(s) <= 1e-12)) rep.a0 = false;
  }

  // A1: either the far tail is already negligible or gamma keeps decaying at
  // a geometric rate (catches the slow algebraic families without tripping on
  // a positive limit).
  const double s_hi = std::max(1e6 * std::max(1.0, scale_), s_max);
  const double tail = (*this)(s_hi);
  const double ratio = tail > 0.0 ? tail / (*this)(s_hi / 100.0) : 0.0;
  rep.a1 = tail < 1e-6 || (tail < (*this)(s_lo) && ratio < 0.99);
  rep.a1_prime = tail < 1.0;

  // A2: least integer k with s^k gamma(s) increasing beyond s_max/2.
  for (int k = 1; k <= 64 && !rep.a2_k; ++k) {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < lattice.size(); ++i) {
      const double s1 = lattice[i], s2 = lattice[i + 1];
      if (s1 < s_max / 2.0) continue;
      const double g1 = (*this)(s1), g2 = (*this)(s2);
      if (g1 <= 0.0 || g2 <= 0.0) { ok = false; break; }
      if (k * std::log(s2 / s1) + std::log(g2 / g1) < -1e-12) { ok = false; break; }
    }
    if (ok) rep.a2_k = k;
  }

  if (family_ == MotilityFamily::Tabulated) {
    rep.a3 = Verdict::Unknown;
  } else {
    rep.a3 = Verdict::Pass;
    for (double s : lattice) {
      const double g = (*this)(s), g1 = d1(s), g2 = d2(s);
      if (2.0 * g1 * g1 > g * g2 * (1.0 + 1e-9) + 1e-300) {
        rep.a3 = Verdict::Fail;
        break;
      }
    }
  }
  return rep;
}

std::string to_string(const AssumptionReport& r) {
  auto mark = [](bool b) { return b ? "✓" : "✗"; };
  std::ostringstream out;
  out << "A0 " << mark(r.a0) << "  A1 " << mark(r.a1) << "  A1' "
      << mark(r.a1_prime) << "  A2";
  if (r.a2_k)
    out << "(k=" << *r.a2_k << ") " << mark(true);
  else
    out << " " << mark(false);
  out << "  A3 ";
  if (r.a3 == Verdict::Unknown)
    out << "unknown";
  else
    out << mark(r.a3 == Verdict::Pass);
  return out.str();
}

}  // namespace motisim
