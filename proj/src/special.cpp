#include "tdho/special.hpp"

#include <boost/math/special_functions/digamma.hpp>

#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"

namespace tdho {

double hermite_function(int n, double x) {
  if (n < 0) throw ContractError("hermite_function: negative order");
  return hermite_functions(n, x).back();
}

std::vector<double> hermite_functions(int nmax, double x) {
  if (nmax < 0) throw ContractError("hermite_functions: negative order");
  std::vector<double> h(static_cast<std::size_t>(nmax) + 1);
  h[0] = std::exp(-0.5 * x * x) / std::sqrt(std::sqrt(std::numbers::pi));
  if (nmax >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int n = 1; n < nmax; ++n) {
    h[n + 1] = std::sqrt(2.0 / (n + 1)) * x * h[n] - std::sqrt(static_cast<double>(n) / (n + 1)) * h[n - 1];
  }
  return h;
}

BesselValues bessel01(double x) {
  if (!(x > 0.0)) throw DomainError("bessel01: argument must be positive");
  return {std::cyl_bessel_j(0.0, x), std::cyl_neumann(0.0, x), std::cyl_bessel_j(1.0, x),
          std::cyl_neumann(1.0, x)};
}

namespace {

constexpr double pi = std::numbers::pi;

// 2F1(-nu, nu+1; 1; z) by its power series, z <= 0.75, small nu.
double hyp_direct(double nu, double z) {
  const double a = -nu;
  const double b = nu + 1.0;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 2000; ++k) {
    term *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0)) * z;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) return sum;
  }
  throw NumericError("Legendre series did not converge");
}

// Same function for z close to 1 through the logarithmic connection formula (c = a + b).
double hyp_log(double nu, double z) {
  const double a = -nu;
  const double b = nu + 1.0;
  const double w = 1.0 - z;
  const double lw = std::log(w);
  double psi1 = boost::math::digamma(1.0);
  double psia = boost::math::digamma(a);
  double psib = boost::math::digamma(b);
  double coef = 1.0;
  double sum = 0.0;
  for (int k = 0; k < 2000; ++k) {
    const double term = coef * (2.0 * psi1 - psia - psib - lw);
    sum += term;
    if (k > 2 && std::abs(term) < 1e-17 * std::abs(sum)) break;
    coef *= (a + k) * (b + k) / ((k + 1.0) * (k + 1.0)) * w;
    psi1 += 1.0 / (k + 1.0);
    psia += 1.0 / (a + k);
    psib += 1.0 / (b + k);
  }
  return -std::sin(pi * nu) / pi * sum;
}

double p_fractional(double nu, double x) {
  const double z = 0.5 * (1.0 - x);
  return z <= 0.75 ? hyp_direct(nu, z) : hyp_log(nu, z);
}

void pq_fractional(double nu, double x, double& p, double& q) {
  p = p_fractional(nu, x);
  const double pm = p_fractional(nu, -x);
  q = pi / (2.0 * std::sin(pi * nu)) * (std::cos(pi * nu) * p - pm);
}

}  // namespace

FerrersValues ferrers_pq(double nu, double x) {
  if (!(x > -1.0 && x < 1.0)) throw DomainError("ferrers_pq: x must lie in (-1, 1)");
  if (!(nu >= 0.0) || !std::isfinite(nu)) throw ContractError("ferrers_pq: degree must be >= 0");
  const double n_round = std::round(nu);
  double p0, q0, p1, q1;
  double base;
  if (std::abs(nu - n_round) < 1e-8) {
    base = 0.0;
    p0 = 1.0;
    q0 = std::atanh(x);
    p1 = x;
    q1 = x * q0 - 1.0;
    nu = n_round;
  } else {
    base = nu - std::floor(nu);
    pq_fractional(base, x, p0, q0);
    pq_fractional(base + 1.0, x, p1, q1);
  }
  // forward recurrence (v+1) f_{v+1} = (2v+1) x f_v - v f_{v-1}, stable on the cut
  double v = base + 1.0;
  const int steps = static_cast<int>(std::llround(nu - base));
  for (int k = 0; k < steps; ++k) {
    const double p2 = ((2.0 * v + 1.0) * x * p1 - v * p0) / (v + 1.0);
    const double q2 = ((2.0 * v + 1.0) * x * q1 - v * q0) / (v + 1.0);
    p0 = p1;
    q0 = q1;
    p1 = p2;
    q1 = q2;
    v += 1.0;
  }
  return {p0, q0, p1, q1};
}

}  // namespace tdho
