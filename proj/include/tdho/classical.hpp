#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "tdho/profile.hpp"

namespace tdho {

inline constexpr double default_tol = 1e-10;

// Fundamental solutions c(t,t0), s(t,t0) with Cauchy data (1,0) and (0,1) at t0.
// As a matrix: T(t,t0) = [[c, s], [c_dot, s_dot]].
struct FundamentalPair {
  double t0 = 0.0;
  double t = 0.0;
  double c = 1.0;
  double c_dot = 0.0;
  double s = 0.0;
  double s_dot = 1.0;

  double wronskian() const { return c * s_dot - c_dot * s; }
  // Pair for (t0, t), i.e. the inverse matrix.
  FundamentalPair inverse() const { return {t, t0, s_dot, -c_dot, -s, c}; }
  // Apply T to Cauchy data (u, u_dot) given at t0.
  std::array<double, 2> apply(double u0, double v0) const {
    return {c * u0 + s * v0, c_dot * u0 + s_dot * v0};
  }
};

// Number of zeros of s(., t0) and c(., t0) on (t0, t] for t > t0, or on [t, t0) for t < t0.
struct PairIndex {
  int zeros_s = 0;
  int zeros_c = 0;
};

struct IndexedPair {
  FundamentalPair pair;
  PairIndex index;
};

// Adaptive 8(5,3) Runge-Kutta integration of the fundamental matrix.
// Zero counts are tracked through Pruefer angles, so they stay exact between output points.
class FundamentalIntegrator {
 public:
  FundamentalIntegrator(const FrequencyProfile& profile, double t0, double tol = default_tol);
  // Resume from a known pair at start.t; zero counts then cover only the resumed path.
  FundamentalIntegrator(const FrequencyProfile& profile, const FundamentalPair& start,
                        double tol = default_tol);

  // Move the state to time t (either direction); throws SingularityError if the
  // step size underflows and DomainError if t leaves the profile interval.
  void advance_to(double t);

  double time() const { return t_; }
  FundamentalPair pair() const { return {t0_, t_, y_[0], y_[1], y_[2], y_[3]}; }
  PairIndex index() const;
  IndexedPair indexed() const { return {pair(), index()}; }
  std::size_t steps() const { return steps_; }

 private:
  double omega_ref(double t) const;
  double angle(double u, double v, double w) const;
  bool attempt(double h, std::array<double, 4>& y_new, double& err);

  FrequencyProfile profile_;
  double t0_;
  double t_;
  double tol_;
  std::array<double, 4> y_;
  double theta_s_ = 0.0;
  double theta_c_;
  double h_ = 0.0;
  double dir_ = 0.0;
  std::size_t steps_ = 0;
  std::array<double, 4> f_;
};

FundamentalPair solve_fundamental(const FrequencyProfile& profile, double t0, double t,
                                  double tol = default_tol);
IndexedPair solve_indexed(const FrequencyProfile& profile, double t0, double t,
                          double tol = default_tol);
// One integration sweep per side of t0; results follow the input order.
std::vector<IndexedPair> solve_fundamental_grid(const FrequencyProfile& profile, double t0,
                                                std::span<const double> times,
                                                double tol = default_tol);

// Exact pair for constant kappa0; throws NumericError on overflow.
FundamentalPair closed_form_constant(double kappa0, double t0, double t);
IndexedPair closed_form_constant_indexed(double kappa0, double t0, double t);

// T(t2,t0) = T(t2,t1) T(t1,t0).
FundamentalPair compose_pair(const FundamentalPair& p21, const FundamentalPair& p10);

struct ZeroCount {
  int count = 0;
  std::vector<double> zeros;
  int tangential = 0;  // exact zero samples without a sign change around them
};

// Zeros of sampled u on (t0, t] (or [t, t0) for t < t0). Sign changes are located by
// linear interpolation; a sample exactly at zero counts once.
ZeroCount index_of(std::span<const double> times, std::span<const double> values, double t0,
                   double t);
// Same, sampling u at n points and refining each bracket by bisection to xtol.
ZeroCount index_of(const std::function<double(double)>& u, double t0, double t,
                   std::size_t samples, double xtol = 1e-13);

// u^eps on the branch continued along the real path: exp(i eps pi m) |u|^eps.
std::complex<double> branch_power(double u, int m, double eps);

}  // namespace tdho
