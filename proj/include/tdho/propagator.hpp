#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>

#include "tdho/classical.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/profile.hpp"

namespace tdho {

using cplx = std::complex<double>;

enum class KernelRegime { regular, caustic };

// K(q, t; q0, t0) = amplitude * exp((i/2)(quad_tt q^2 + quad_00 q0^2 + 2 cross q q0)),
// times delta(q0 - delta_scale * q) in the caustic regime.
struct KernelValue {
  KernelRegime regime = KernelRegime::regular;
  double t0 = 0.0;
  double t = 0.0;
  cplx amplitude{};
  cplx quad_tt{};
  cplx quad_00{};
  cplx cross{};
  double delta_scale = 0.0;
  int maslov_index = 0;
  // Classical pair of (t0 -> t) when the kernel is built from one; lets transition
  // amplitudes avoid the 1/s cancellations near caustics. Cleared by representation changes.
  std::optional<FundamentalPair> pair;

  cplx exponent(double q, double q0) const {
    return cplx(0.0, 0.5) * (quad_tt * q * q + quad_00 * q0 * q0 + 2.0 * cross * q * q0);
  }
  // Pointwise value; throws CausticError in the caustic regime.
  cplx operator()(double q, double q0) const;
};

inline constexpr double default_caustic_tol = 1e-12;

// Kernel from an indexed pair. |s| <= caustic_tol * max(1, |t - t0|) selects the caustic rule.
KernelValue kernel(const IndexedPair& ip, double caustic_tol = default_caustic_tol);
KernelValue kernel(const FrequencyProfile& profile, double t0, double t, double tol = default_tol,
                   double caustic_tol = default_caustic_tol);
cplx kernel(const FrequencyProfile& profile, double t0, double t, double q, double q0,
            double tol = default_tol);

// Three-factor construction with an arbitrary Ermakov-Pinney solution.
KernelValue kernel_via_factorization(const EPSolution& ep, double t0, double t,
                                     double caustic_tol = default_caustic_tol);
cplx kernel_via_factorization(const EPSolution& ep, double t0, double t, double q, double q0);

// Hamiltonian shifted by theta(t) 1: K -> K exp(-i int theta).
double theta_integral(const std::function<double(double)>& theta, double t0, double t);
KernelValue kernel_shifted(const KernelValue& k, double theta_integral);

// Kernel in the Gaussian-measure representation fixed by (alpha, beta),
// alpha conj(beta) - beta conj(alpha) = i.
KernelValue kernel_measure_rep(const KernelValue& k, cplx alpha, cplx beta);
KernelValue kernel_measure_rep_inverse(const KernelValue& k, cplx alpha, cplx beta);
void require_representation(cplx alpha, cplx beta);
// Matrix element of the kernel between constant functions 1 in L^2(mu_alpha).
cplx measure_vacuum_element(const KernelValue& measure_kernel, cplx alpha);

// psi(q) = exp(-a q^2 / 2 + b q + log_norm), Re a > 0.
struct GaussianPacket {
  cplx a{1.0, 0.0};
  cplx b{};
  cplx log_norm{};

  cplx operator()(double q) const { return std::exp(-0.5 * a * q * q + b * q + log_norm); }
  double norm_squared() const;
  static GaussianPacket normalized(cplx a, cplx b = {});
};

GaussianPacket evolve_gaussian(const GaussianPacket& psi, const KernelValue& k);

struct PdeResidual {
  double max_abs = 0.0;
  double at_t = 0.0;
  double at_q = 0.0;
};
// max |i dK/dt + (1/2) d2K/dq2 - (1/2) q^2 kappa K| on the grid, fourth-order central
// differences with step h in both q and t.
PdeResidual pde_residual(const FrequencyProfile& profile, double t0, double q0,
                         std::span<const double> q_grid, std::span<const double> t_grid,
                         double h = 1e-3, double tol = default_tol);

}  // namespace tdho
