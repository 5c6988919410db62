#pragma once

#include <complex>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/propagator.hpp"

namespace tdho {

struct Matrix2c {
  cplx m11, m12, m22;  // symmetric
  cplx det() const { return m11 * m22 - m12 * m12; }
};

// Gaussian form of the Hermite generating integral; index 1 is the initial slot
// (q0, omega1), index 2 the final one. Regular kernels only.
Matrix2c lambda_matrix(const KernelValue& k, double omega1, double omega2);

// [x1^n1 x2^n2] exp(b11 x1^2 + 2 b12 x1 x2 + b22 x2^2); zero when n1 + n2 is odd.
cplx generating_coefficient(cplx b11, cplx b12, cplx b22, int n1, int n2);

// <phi_n2^{omega2} | U(t, t0) phi_n1^{omega1}> for the kernel of (t, t0).
cplx transition_amplitude(const KernelValue& k, double omega1, double omega2, int n1, int n2);
// table[n1][n2], n1 <= n1max, n2 <= n2max.
std::vector<std::vector<cplx>> transition_table(const KernelValue& k, double omega1,
                                                double omega2, int n1max, int n2max);

// Direct two-dimensional quadrature of the same matrix element.
cplx transition_amplitude_quadrature(const KernelValue& k, double omega1, double omega2, int n1,
                                     int n2, double rel_tol = 1e-9);

struct Bogoliubov {
  cplx A, B;
};
Bogoliubov bogoliubov(const FundamentalPair& p, double omega);

cplx vacuum_persistence(const KernelValue& k, double omega);
// <phi_2n | U phi_0>, n = 0..nmax.
std::vector<cplx> vacuum_decay_coeffs(const KernelValue& k, double omega, int nmax);
// Phase of <phi_0|U phi_0> for t close to t0.
double near_time_phase(const FundamentalPair& p, double omega);

}  // namespace tdho
