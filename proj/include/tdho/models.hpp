#pragma once

#include <complex>
#include <string>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/profile.hpp"

namespace tdho {

enum class ModelKind { constant, free, tachyonic, mathieu, gowdy_t3, gowdy_s };

struct ModelSpec {
  ModelKind kind = ModelKind::constant;
  // constant: p1 = kappa0; tachyonic: p1 = omega (kappa = -omega^2);
  // mathieu: p1 = a, p2 = b; gowdy_t3 / gowdy_s: p1 = omega.
  double p1 = 0.0;
  double p2 = 0.0;

  FrequencyProfile profile() const;
  std::string name() const;
};

ModelKind parse_model_kind(const std::string& s);

bool has_closed_form(const ModelSpec& m);
// Exact pair from elementary, Bessel or Legendre functions.
FundamentalPair closed_form_pair(const ModelSpec& m, double t0, double t);

// Weights of the two basis squares in the Gowdy 3-sphere rho: unit (1, 1) or
// balanced (pi/2, 2/pi), the latter approaching omega^{-1/2} for large degree.
enum class RhoChoice { unit_weights, balanced };

// Closed-form Ermakov-Pinney solutions with bounded, non-oscillating behaviour.
EPSolution canonical_ep(const ModelSpec& m, double anchor,
                        RhoChoice choice = RhoChoice::unit_weights);
RhoValue canonical_rho(const ModelSpec& m, double t, RhoChoice choice = RhoChoice::unit_weights);

struct Monodromy {
  FundamentalPair pair;  // over one period [0, pi]
  double trace = 0.0;
  double det = 0.0;
  std::complex<double> exponent;  // r with 2 cos(pi r) = trace
  bool stable = false;
};
Monodromy mathieu_monodromy(double a, double b, double tol = default_tol);
// a such that the Floquet exponent equals r, searched inside [a_lo, a_hi].
double mathieu_characteristic_value(double r, double b, double a_lo, double a_hi,
                                    double tol = default_tol);

struct ClosedFormCheck {
  std::string model;
  double t0 = 0.0;
  double t = 0.0;
  double max_abs_diff = 0.0;  // closed form vs numerical pair
  double wronskian_error = 0.0;
};
ClosedFormCheck check_closed_form(const ModelSpec& m, double t0, double t, double tol = default_tol);

}  // namespace tdho
