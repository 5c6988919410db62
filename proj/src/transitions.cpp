#include "tdho/transitions.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"
#include "tdho/quadrature.hpp"
#include "tdho/special.hpp"

namespace tdho {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

cplx ipow(cplx z, int n) {
  cplx r(1.0, 0.0);
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

double lfact(int n) { return std::lgamma(n + 1.0); }

void require_frequency(double w) {
  if (!(w > 0.0) || !std::isfinite(w)) throw ContractError("reference frequency must be positive");
}

// Gaussian reduction of the generating integral: value = gauss * exp(x^T B x).
struct Reduced {
  cplx gauss;  // kernel amplitude times the Gaussian integral
  cplx b11, b12, b22;
};

Reduced reduce(const KernelValue& k, double w1, double w2) {
  require_frequency(w1);
  require_frequency(w2);
  const double d1 = std::sqrt(w1);
  const double d2 = std::sqrt(w2);
  if (k.regime == KernelRegime::regular && k.pair) {
    // det L = Delta / s with the Wronskian used to cancel the 1/s^2 terms exactly.
    const FundamentalPair& p = *k.pair;
    const cplx delta = w1 * w2 * p.s - I * (w1 * p.s_dot + w2 * p.c) - p.c_dot;
    return {k.amplitude * 2.0 * pi / std::sqrt(delta / p.s), 2.0 * w1 * (w2 * p.s - I * p.s_dot) / delta - 1.0,
            -2.0 * I * d1 * d2 / delta, 2.0 * w2 * (w1 * p.s - I * p.c) / delta - 1.0};
  }
  if (k.regime == KernelRegime::regular) {
    const Matrix2c L = lambda_matrix(k, w1, w2);
    const cplx det = L.det();
    // B = 2 D L^{-1} D - I
    return {k.amplitude * 2.0 * pi / std::sqrt(det), 2.0 * w1 * L.m22 / det - 1.0,
            -2.0 * d1 * d2 * L.m12 / det, 2.0 * w2 * L.m11 / det - 1.0};
  }
  // caustic: q0 = s q, one-dimensional Gaussian in q
  const double s = k.delta_scale;
  const cplx lam = w1 * s * s + w2 - I * (k.quad_tt + k.quad_00 * s * s + 2.0 * k.cross * s);
  const cplx e1 = d1 * s;
  const cplx e2 = d2;
  return {k.amplitude * std::sqrt(2.0 * pi / lam), 2.0 * e1 * e1 / lam - 1.0, 2.0 * e1 * e2 / lam,
          2.0 * e2 * e2 / lam - 1.0};
}

double norm_log(double w1, double w2, int n1, int n2) {
  return 0.5 * (0.5 * std::log(w1 * w2) - (n1 + n2) * std::log(2.0) - std::log(pi));
}

// sqrt(n1! n2!) [x1^n1 x2^n2] exp(x^T B x), factorials combined in log space.
cplx scaled_coefficient(cplx b11, cplx b12, cplx b22, int n1, int n2) {
  if ((n1 + n2) % 2 != 0) return {0.0, 0.0};
  const int h = (n1 - n2) / 2;
  const int m_lo = std::max(0, -h);
  const int m_hi = n2 / 2;
  const double lf = 0.5 * (lfact(n1) + lfact(n2));
  cplx sum(0.0, 0.0);
  for (int m = m_lo; m <= m_hi; ++m) {
    const double w = std::exp(lf - lfact(m) - lfact(h + m) - lfact(n2 - 2 * m));
    sum += w * ipow(b11, h + m) * ipow(b22, m) * ipow(2.0 * b12, n2 - 2 * m);
  }
  return sum;
}

}  // namespace

Matrix2c lambda_matrix(const KernelValue& k, double omega1, double omega2) {
  if (k.regime != KernelRegime::regular)
    throw CausticError("lambda_matrix: kernel is at a caustic");
  return {omega1 - I * k.quad_00, -I * k.cross, omega2 - I * k.quad_tt};
}

cplx generating_coefficient(cplx b11, cplx b12, cplx b22, int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ContractError("generating_coefficient: negative index");
  return scaled_coefficient(b11, b12, b22, n1, n2) *
         std::exp(-0.5 * (lfact(n1) + lfact(n2)));
}

cplx transition_amplitude(const KernelValue& k, double omega1, double omega2, int n1, int n2) {
  if (n1 < 0 || n2 < 0) throw ContractError("transition_amplitude: negative level");
  const Reduced r = reduce(k, omega1, omega2);
  return std::exp(norm_log(omega1, omega2, n1, n2)) * r.gauss *
         scaled_coefficient(r.b11, r.b12, r.b22, n1, n2);
}

std::vector<std::vector<cplx>> transition_table(const KernelValue& k, double omega1,
                                                double omega2, int n1max, int n2max) {
  if (n1max < 0 || n2max < 0) throw ContractError("transition_table: negative level");
  const Reduced r = reduce(k, omega1, omega2);
  std::vector<std::vector<cplx>> t(n1max + 1, std::vector<cplx>(n2max + 1));
  for (int n1 = 0; n1 <= n1max; ++n1)
    for (int n2 = 0; n2 <= n2max; ++n2)
      t[n1][n2] = std::exp(norm_log(omega1, omega2, n1, n2)) * r.gauss *
                  scaled_coefficient(r.b11, r.b12, r.b22, n1, n2);
  return t;
}

cplx transition_amplitude_quadrature(const KernelValue& k, double omega1, double omega2, int n1,
                                     int n2, double rel_tol) {
  require_frequency(omega1);
  require_frequency(omega2);
  if (k.regime != KernelRegime::regular)
    throw CausticError("quadrature oracle needs a regular kernel");
  const int nmax = std::max(n1, n2);
  const double x_edge = std::sqrt(2.0 * nmax + 1.0) + 8.5;
  const double l1 = x_edge / std::sqrt(omega1);
  const double l2 = x_edge / std::sqrt(omega2);
  const double s1 = std::sqrt(std::sqrt(omega1));
  const double s2 = std::sqrt(std::sqrt(omega2));
  auto f = [&](double q, double q0) {
    const double phi2 = s2 * hermite_function(n2, std::sqrt(omega2) * q);
    const double phi1 = s1 * hermite_function(n1, std::sqrt(omega1) * q0);
    return phi2 * phi1 * k(q, q0);
  };
  const double abs_tol = rel_tol * std::abs(k.amplitude) * 1e-2;
  return integrate2d(f, -l2, l2, -l1, l1, rel_tol, abs_tol).value;
}

Bogoliubov bogoliubov(const FundamentalPair& p, double omega) {
  require_frequency(omega);
  return {0.5 * cplx(p.c + p.s_dot, p.c_dot / omega - omega * p.s),
          0.5 * cplx(p.c - p.s_dot, p.c_dot / omega + omega * p.s)};
}

cplx vacuum_persistence(const KernelValue& k, double omega) {
  return transition_amplitude(k, omega, omega, 0, 0);
}

std::vector<cplx> vacuum_decay_coeffs(const KernelValue& k, double omega, int nmax) {
  if (nmax < 0) throw ContractError("vacuum_decay_coeffs: negative nmax");
  const Reduced r = reduce(k, omega, omega);
  const cplx v = std::exp(norm_log(omega, omega, 0, 0)) * r.gauss;
  std::vector<cplx> out(nmax + 1);
  cplx rn(1.0, 0.0);
  for (int n = 0; n <= nmax; ++n) {
    const double w = std::exp(0.5 * lfact(2 * n) - n * std::log(2.0) - lfact(n));
    out[n] = w * rn * v;
    rn *= r.b22;
  }
  return out;
}

double near_time_phase(const FundamentalPair& p, double omega) {
  require_frequency(omega);
  return -0.5 * std::atan2(omega * p.s - p.c_dot / omega, p.c + p.s_dot);
}

}  // namespace tdho
