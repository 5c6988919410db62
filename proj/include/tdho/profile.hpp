#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

namespace tdho {

// Open interval (lo, hi); infinite ends allowed.
struct Interval {
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  bool contains(double t) const { return t > lo && t < hi; }
};

enum class ProfileKind { constant, mathieu, gowdy_t3, gowdy_s, table, custom };

// Squared frequency kappa(t) of u'' + kappa u = 0 on an open interval.
class FrequencyProfile {
 public:
  static FrequencyProfile constant(double kappa0);
  static FrequencyProfile mathieu(double a, double b);
  static FrequencyProfile gowdy_t3(double omega);
  static FrequencyProfile gowdy_s(double omega);
  // Monotone cubic (PCHIP) interpolation of samples; the interval is the open grid span.
  static FrequencyProfile table(std::vector<double> t, std::vector<double> kappa);
  static FrequencyProfile custom(std::string name, Interval interval,
                                 std::function<double(double)> kappa);

  ProfileKind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  const Interval& interval() const { return interval_; }
  // constant: {kappa0}; mathieu: {a, b}; gowdy_t3 / gowdy_s: {omega}.
  const std::vector<double>& params() const { return params_; }

  bool contains(double t) const { return interval_.contains(t); }
  void require_inside(double t, const char* what) const;

  // Checked evaluation; throws DomainError outside the interval.
  double operator()(double t) const;
  // Hot-path evaluation without the domain check.
  double eval(double t) const {
    switch (kind_) {
      case ProfileKind::constant:
        return params_[0];
      case ProfileKind::mathieu:
        return params_[0] - 2.0 * params_[1] * std::cos(2.0 * t);
      case ProfileKind::gowdy_t3:
        return omega2_ + 0.25 / (t * t);
      case ProfileKind::gowdy_s: {
        const double sn = std::sin(t);
        return omega2_ + 0.25 * (1.0 + 1.0 / (sn * sn));
      }
      default:
        return fn_(t);
    }
  }

  bool is_constant() const { return kind_ == ProfileKind::constant; }
  // Interior points where kappa is only once differentiable (table knots); integrators step onto them.
  const std::vector<double>& breakpoints() const { return breakpoints_; }

 private:
  FrequencyProfile() = default;
  ProfileKind kind_ = ProfileKind::constant;
  std::string name_;
  Interval interval_;
  std::vector<double> params_;
  std::vector<double> breakpoints_;
  double omega2_ = 0.0;
  std::function<double(double)> fn_;
};

}  // namespace tdho
