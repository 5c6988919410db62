#pragma once

#include <complex>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/propagator.hpp"

namespace tdho {

// Eigenfunction psi_n^rho(t, q) of the quadratic invariant built from rho.
cplx lewis_eigenfunction(const EPSolution& ep, int n, double t, double q);
// Coherent superposition of the psi_n^rho(t) with label z.
cplx coherent_wavefunction(const EPSolution& ep, cplx z, double t, double q);

struct EvolvedLabel {
  cplx z;             // label at t
  cplx global_phase;  // exp(-i Phi / 2)
  double phase = 0.0; // Phi(t0 -> t)
};
EvolvedLabel evolve_label(const EPSolution& ep, cplx z, double t0, double t);

struct PhasePoint {
  double q = 0.0;
  double p = 0.0;
};
// <Q>, <P> of the coherent state with label z (already evolved to t).
PhasePoint expectations(const EPSolution& ep, cplx z, double t);
// Classical Cauchy data at t0 matching label z.
PhasePoint cauchy_data(const EPSolution& ep, cplx z, double t0);

struct Uncertainties {
  double dq = 0.0;
  double dp = 0.0;
  double product = 0.0;
};
Uncertainties uncertainties(const EPSolution& ep, double t);

enum class Region { t0_plus, t_plus_plus, intermediate };
// t0_plus: 0 < t1 << 1/omega << t2; t_plus_plus: 1/omega << t1 < t2; "<<" is a factor `ratio`.
Region classify_region(double omega, double t1, double t2, double ratio = 10.0);
const char* region_name(Region r);

struct BackwardVacuumPoint {
  double t1 = 0.0;
  double overlap = 0.0;   // |<phi_0 | U(t1, t2) phi_0>|
  double captured = 0.0;  // sum_{n <= nmax} |<phi_2n | U(t1, t2) phi_0>|^2
  Region region = Region::intermediate;
};
// Ground state at t2 evolved back to each t1.
std::vector<BackwardVacuumPoint> backward_vacuum_profile(const FrequencyProfile& profile,
                                                         double omega,
                                                         const std::vector<double>& t1_list,
                                                         double t2, int nmax = 64,
                                                         double tol = default_tol);

}  // namespace tdho
