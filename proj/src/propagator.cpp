#include "tdho/propagator.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "tdho/errors.hpp"
#include "tdho/quadrature.hpp"

namespace tdho {

namespace {

constexpr double pi = std::numbers::pi;
const cplx I(0.0, 1.0);

// exp(-i sigma pi/4) exp(-i sigma pi m/2) |s|^{-1/2} / sqrt(2 pi); sigma = +1 forward, -1 backward.
cplx regular_prefactor(double s, int m, double sigma) {
  return std::polar(1.0 / std::sqrt(2.0 * pi * std::abs(s)), -sigma * pi * (0.25 + 0.5 * m));
}

cplx caustic_prefactor(double c, int m, double sigma) {
  return std::polar(1.0 / std::sqrt(std::abs(c)), -sigma * pi * 0.5 * m);
}

bool is_caustic(double s, double t0, double t, double tol) {
  return std::abs(s) <= tol * std::max(1.0, std::abs(t - t0));
}

}  // namespace

cplx KernelValue::operator()(double q, double q0) const {
  if (regime == KernelRegime::caustic)
    throw CausticError("kernel is a distribution at a caustic; pointwise value undefined");
  return amplitude * std::exp(exponent(q, q0));
}

KernelValue kernel(const IndexedPair& ip, double caustic_tol) {
  const auto& p = ip.pair;
  const double sigma = p.t >= p.t0 ? 1.0 : -1.0;
  KernelValue k;
  k.t0 = p.t0;
  k.t = p.t;
  k.pair = p;
  if (p.t == p.t0) throw CausticError("kernel at t = t0 is the identity distribution");
  if (is_caustic(p.s, p.t0, p.t, caustic_tol)) {
    // At a caustic c has as many zeros on the path as s, counting the endpoint.
    k.regime = KernelRegime::caustic;
    k.maslov_index = ip.index.zeros_c;
    k.amplitude = caustic_prefactor(p.c, k.maslov_index, sigma);
    k.quad_tt = p.c_dot / p.c;
    k.delta_scale = 1.0 / p.c;
    return k;
  }
  k.regime = KernelRegime::regular;
  k.maslov_index = ip.index.zeros_s;
  k.amplitude = regular_prefactor(p.s, k.maslov_index, sigma);
  k.quad_tt = p.s_dot / p.s;
  k.quad_00 = p.c / p.s;
  k.cross = -1.0 / p.s;
  return k;
}

KernelValue kernel(const FrequencyProfile& profile, double t0, double t, double tol,
                   double caustic_tol) {
  return kernel(solve_indexed(profile, t0, t, tol), caustic_tol);
}

cplx kernel(const FrequencyProfile& profile, double t0, double t, double q, double q0,
            double tol) {
  return kernel(profile, t0, t, tol)(q, q0);
}

KernelValue kernel_via_factorization(const EPSolution& ep, double t0, double t,
                                     double caustic_tol) {
  if (t == t0) throw CausticError("kernel at t = t0 is the identity distribution");
  const RhoValue r0 = ep(t0);
  const RhoValue r = ep(t);
  const double phi = ep.phase_integral(t0, t);
  const double sigma = t >= t0 ? 1.0 : -1.0;
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  KernelValue k;
  k.t0 = t0;
  k.t = t;
  k.pair = fundamental_from_ep(ep, t0, t);
  const double rr0 = r.rho * r0.rho;
  // Unit-frequency kernel at time phi, conjugated by the scaling factors.
  if (is_caustic(sp * rr0, t0, t, caustic_tol)) {
    k.regime = KernelRegime::caustic;
    k.maslov_index = static_cast<int>(std::floor(std::abs(phi) / pi + 0.5));
    k.amplitude = std::sqrt(r0.rho / r.rho) * caustic_prefactor(cp, k.maslov_index, sigma);
    k.quad_tt = r.rho_dot / r.rho - std::tan(phi) / (r.rho * r.rho) -
                r0.rho_dot * r0.rho / (r.rho * r.rho * cp * cp);
    k.delta_scale = r0.rho / (r.rho * cp);
    return k;
  }
  k.regime = KernelRegime::regular;
  k.maslov_index = static_cast<int>(std::floor(std::abs(phi) / pi));
  k.amplitude = regular_prefactor(sp, k.maslov_index, sigma) / std::sqrt(rr0);
  k.quad_tt = cp / (sp * r.rho * r.rho) + r.rho_dot / r.rho;
  k.quad_00 = cp / (sp * r0.rho * r0.rho) - r0.rho_dot / r0.rho;
  k.cross = -1.0 / (sp * rr0);
  return k;
}

cplx kernel_via_factorization(const EPSolution& ep, double t0, double t, double q, double q0) {
  return kernel_via_factorization(ep, t0, t)(q, q0);
}

double theta_integral(const std::function<double(double)>& theta, double t0, double t) {
  if (!theta) throw ContractError("theta_integral: empty function");
  return integrate(theta, t0, t, 1e-12, 1e-15).value;
}

KernelValue kernel_shifted(const KernelValue& k, double theta_int) {
  KernelValue out = k;
  out.amplitude *= std::exp(-I * theta_int);
  return out;
}

void require_representation(cplx alpha, cplx beta) {
  const cplx w = alpha * std::conj(beta) - beta * std::conj(alpha);
  if (std::abs(w - I) > 1e-12)
    throw ContractError("representation pair violates alpha conj(beta) - beta conj(alpha) = i");
}

KernelValue kernel_measure_rep(const KernelValue& k, cplx alpha, cplx beta) {
  require_representation(alpha, beta);
  KernelValue out = k;
  out.pair.reset();
  out.amplitude *= std::sqrt(2.0 * pi) * std::abs(alpha);
  out.quad_00 += beta / alpha;
  out.quad_tt -= std::conj(beta) / std::conj(alpha);
  return out;
}

KernelValue kernel_measure_rep_inverse(const KernelValue& k, cplx alpha, cplx beta) {
  require_representation(alpha, beta);
  KernelValue out = k;
  out.pair.reset();
  out.amplitude /= std::sqrt(2.0 * pi) * std::abs(alpha);
  out.quad_00 -= beta / alpha;
  out.quad_tt += std::conj(beta) / std::conj(alpha);
  return out;
}

cplx measure_vacuum_element(const KernelValue& k, cplx alpha) {
  const double w = 1.0 / std::norm(alpha);
  const cplx pref = k.amplitude * w / (2.0 * pi);
  if (k.regime == KernelRegime::caustic) {
    const double s = k.delta_scale;
    const cplx m = (1.0 + s * s) * w - I * (k.quad_tt + k.quad_00 * s * s + 2.0 * k.cross * s);
    return pref * std::sqrt(2.0 * pi / m);
  }
  const cplx m11 = w - I * k.quad_tt;
  const cplx m22 = w - I * k.quad_00;
  const cplx m12 = -I * k.cross;
  return pref * 2.0 * pi / std::sqrt(m11 * m22 - m12 * m12);
}

double GaussianPacket::norm_squared() const {
  const double ar = a.real();
  if (!(ar > 0.0)) throw ContractError("Gaussian packet needs Re a > 0");
  const double br = b.real();
  return std::sqrt(pi / ar) * std::exp(br * br / ar + 2.0 * log_norm.real());
}

GaussianPacket GaussianPacket::normalized(cplx a, cplx b) {
  GaussianPacket g{a, b, 0.0};
  const double n2 = g.norm_squared();
  g.log_norm = -0.5 * std::log(n2);
  return g;
}

GaussianPacket evolve_gaussian(const GaussianPacket& psi, const KernelValue& k) {
  if (!(psi.a.real() > 0.0)) throw ContractError("Gaussian packet needs Re a > 0");
  GaussianPacket out;
  if (k.regime == KernelRegime::caustic) {
    // psi'(q) = amp exp((i/2)(tt + 00 s^2 + 2 cr s) q^2) psi(s q)
    const double s = k.delta_scale;
    const cplx extra = k.quad_tt + k.quad_00 * s * s + 2.0 * k.cross * s;
    out.a = psi.a * s * s - I * extra;
    out.b = psi.b * s;
    out.log_norm = psi.log_norm + std::log(k.amplitude);
    return out;
  }
  // integrate over q0: -(1/2)(a - i q00) q0^2 + (b + i cr q) q0
  const cplx alpha = psi.a - I * k.quad_00;
  const cplx lin_b = psi.b;
  const cplx lin_q = I * k.cross;
  // completing the square: (lin_b + lin_q q)^2 / (2 alpha)
  out.a = -I * k.quad_tt - lin_q * lin_q / alpha;
  out.b = lin_b * lin_q / alpha;
  out.log_norm = psi.log_norm + std::log(k.amplitude) + 0.5 * std::log(2.0 * pi) -
                 0.5 * std::log(alpha) + lin_b * lin_b / (2.0 * alpha);
  return out;
}

PdeResidual pde_residual(const FrequencyProfile& profile, double t0, double q0,
                         std::span<const double> q_grid, std::span<const double> t_grid, double h,
                         double tol) {
  if (!(h > 0.0)) throw ContractError("pde_residual: step must be positive");
  std::vector<double> times;
  times.reserve(t_grid.size() * 5);
  for (double t : t_grid)
    for (int j = -2; j <= 2; ++j) times.push_back(t + j * h);
  const auto pairs = solve_fundamental_grid(profile, t0, times, tol);
  PdeResidual res;
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    KernelValue k[5];
    for (int j = 0; j < 5; ++j) {
      k[j] = kernel(pairs[5 * i + j]);
      if (k[j].regime != KernelRegime::regular)
        throw CausticError("pde_residual: grid time too close to a caustic");
    }
    const double t = t_grid[i];
    const double kap = profile(t);
    for (double q : q_grid) {
      const cplx kt = (-k[4](q, q0) + 8.0 * k[3](q, q0) - 8.0 * k[1](q, q0) + k[0](q, q0)) / (12.0 * h);
      const cplx kc = k[2](q, q0);
      const cplx kqq = (-k[2](q + 2 * h, q0) + 16.0 * k[2](q + h, q0) - 30.0 * kc +
                        16.0 * k[2](q - h, q0) - k[2](q - 2 * h, q0)) /
                       (12.0 * h * h);
      const double r = std::abs(I * kt + 0.5 * kqq - 0.5 * q * q * kap * kc);
      if (r > res.max_abs) res = {r, t, q};
    }
  }
  return res;
}

}  // namespace tdho
