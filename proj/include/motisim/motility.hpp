// The motility family gamma(v): decreasing diffusion coefficients, the
// assumption ladder (A0)-(A3), the anchor a with gamma(a) < 1/tau, and the
// antiderivative Gamma(s) = int_a^s gamma used by the comparison bounds.
#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace motisim {

enum class MotilityFamily { ExpDecay, Power, Gaussian, DoubleExp, Tabulated };

enum class Verdict { Pass, Fail, Unknown };

struct AssumptionReport {
  bool a0 = false;        // gamma > 0, gamma' <= 0
  bool a1 = false;        // gamma(s) -> 0
  bool a1_prime = false;  // gamma(s) -> gamma_inf < 1
  std::optional<int> a2_k;  // least integer k with s^k gamma increasing; nullopt = fails
  Verdict a3 = Verdict::Unknown;  // 2|gamma'|^2 <= gamma gamma''
};

class Motility {
 public:
  static Motility exp_decay(double scale = 1.0);
  static Motility power(double k);  // s^{-k}, k > 0; singular at s = 0
  static Motility gaussian(double scale = 1.0);
  static Motility double_exp(double scale = 1.0);
  // Two-column CSV (s, gamma(s)) with strictly increasing s; linear
  // interpolation, clamped outside the table.
  static Motility tabulated(std::vector<double> s, std::vector<double> gamma);
  static Motility tabulated_from_csv(const std::filesystem::path& path);

  MotilityFamily family() const { return family_; }
  std::string family_name() const;
  double param_k() const { return k_; }
  double scale() const { return scale_; }
  double floor_s() const { return floor_s_; }

  // gamma, gamma', gamma''. Analytic per family (never finite-differenced);
  // throws std::domain_error below floor_s for singular families and
  // std::logic_error for the second derivative of tabulated data.
  double operator()(double s) const;
  double d1(double s) const;
  double d2(double s) const;

  // Gamma(s) = int_a^s gamma; closed form where available, adaptive
  // quadrature (abs tol 1e-10) otherwise. Requires the anchor to be set.
  double big_gamma(double s) const;

  // Smallest a with gamma(a) <= 1/(2 tau); throws std::runtime_error when no
  // such point exists below the search ceiling (an (A1) violation).
  double choose_anchor(double tau);
  void set_anchor(double a) { anchor_ = a; }
  bool has_anchor() const { return anchor_.has_value(); }
  double anchor() const;

  AssumptionReport check_assumptions(double s_max = 1e3, int samples = 10000) const;

 private:
  Motility() = default;
  double tab_eval(double s) const;
  double tab_d1(double s) const;

  MotilityFamily family_ = MotilityFamily::ExpDecay;
  double k_ = 1.0;
  double scale_ = 1.0;
  double floor_s_ = 0.0;
  std::optional<double> anchor_;
  std::vector<double> tab_s_, tab_g_;
};

std::string to_string(const AssumptionReport& r);

}  // namespace motisim
