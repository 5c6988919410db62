#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/profile.hpp"

namespace tdho {

// Positive-definite symmetric form A with det A = 1; rho^2 = a11 c^2 + a22 s^2 + 2 a12 s c.
struct EPQuadraticForm {
  double a11 = 1.0;
  double a12 = 0.0;
  double a22 = 1.0;

  double det() const { return a11 * a22 - a12 * a12; }
  // Scales (a11, a12, a22) to unit determinant; scale receives the factor applied.
  static EPQuadraticForm normalized(double a11, double a12, double a22, double* scale = nullptr);
};

struct RhoValue {
  double rho = 1.0;
  double rho_dot = 0.0;
};

// Positive solution of rho'' + kappa rho = rho^{-3}, with a cached phase integral
// Phi = int dtau / rho^2. Copies share the cache; evaluation is thread-safe and the
// result does not depend on evaluation order.
class EPSolution {
 public:
  static EPSolution from_form(const FrequencyProfile& profile, double anchor, EPQuadraticForm form,
                              double tol = default_tol);
  static EPSolution closed_form(const FrequencyProfile& profile, double anchor, std::string name,
                                std::function<RhoValue(double)> rho);

  const FrequencyProfile& profile() const;
  double anchor() const;
  const std::string& name() const;
  bool has_form() const;
  const EPQuadraticForm& form() const;

  RhoValue operator()(double t) const;
  double rho(double t) const { return (*this)(t).rho; }
  // rho'' from the fundamental pair when built from a form, else by finite differences.
  double rho_ddot(double t) const;
  // Phi(t0 -> t).
  double phase_integral(double t0, double t) const;

 private:
  struct State;
  std::shared_ptr<State> st_;
};

double phase_integral(const EPSolution& ep, double t0, double t);

// c, s and derivatives from rho and Phi.
FundamentalPair fundamental_from_ep(const EPSolution& ep, double t0, double t);

// Zeros of s(., t0) in (t_lo, t_hi]: the points where Phi(t0 -> t) is a nonzero multiple of pi.
std::vector<double> locate_s_zeros(const EPSolution& ep, double t0, double t_lo, double t_hi);

// rho'' + kappa rho - rho^{-3}.
double ep_equation_residual(const EPSolution& ep, double t);

}  // namespace tdho
