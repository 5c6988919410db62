#include "tdho/semiclassical.hpp"

#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"
#include "tdho/special.hpp"
#include "tdho/transitions.hpp"

namespace tdho {

namespace {
const cplx I(0.0, 1.0);
}

cplx lewis_eigenfunction(const EPSolution& ep, int n, double t, double q) {
  if (n < 0) throw ContractError("lewis_eigenfunction: negative level");
  const RhoValue r = ep(t);
  const double h = hermite_function(n, q / r.rho);
  return h / std::sqrt(r.rho) * std::exp(I * 0.5 * (r.rho_dot / r.rho) * q * q);
}

cplx coherent_wavefunction(const EPSolution& ep, cplx z, double t, double q) {
  const RhoValue r = ep(t);
  const double x = q / r.rho;
  const cplx e = -0.5 * std::norm(z) - 0.5 * x * x + std::sqrt(2.0) * z * x - 0.5 * z * z +
                 I * 0.5 * (r.rho_dot / r.rho) * q * q;
  return std::exp(e) / std::sqrt(r.rho * std::sqrt(std::numbers::pi));
}

EvolvedLabel evolve_label(const EPSolution& ep, cplx z, double t0, double t) {
  const double phi = ep.phase_integral(t0, t);
  return {z * std::exp(-I * phi), std::exp(-I * 0.5 * phi), phi};
}

PhasePoint expectations(const EPSolution& ep, cplx z, double t) {
  const RhoValue r = ep(t);
  return {std::sqrt(2.0) * r.rho * z.real(),
          std::sqrt(2.0) * ((r.rho_dot - I / r.rho) * z).real()};
}

PhasePoint cauchy_data(const EPSolution& ep, cplx z, double t0) {
  const RhoValue r = ep(t0);
  return {std::sqrt(2.0) * r.rho * z.real(),
          std::sqrt(2.0) * (r.rho_dot * z.real() + z.imag() / r.rho)};
}

Uncertainties uncertainties(const EPSolution& ep, double t) {
  const RhoValue r = ep(t);
  Uncertainties u;
  u.dq = r.rho / std::sqrt(2.0);
  u.dp = std::hypot(r.rho_dot, 1.0 / r.rho) / std::sqrt(2.0);
  u.product = u.dq * u.dp;
  return u;
}

Region classify_region(double omega, double t1, double t2, double ratio) {
  if (!(omega > 0.0)) throw ContractError("classify_region: omega must be positive");
  const double scale = 1.0 / omega;
  if (t1 > 0.0 && t1 * ratio <= scale && t2 >= ratio * scale) return Region::t0_plus;
  if (t1 >= ratio * scale && t1 < t2) return Region::t_plus_plus;
  return Region::intermediate;
}

const char* region_name(Region r) {
  switch (r) {
    case Region::t0_plus:
      return "T0+";
    case Region::t_plus_plus:
      return "T++";
    default:
      return "intermediate";
  }
}

std::vector<BackwardVacuumPoint> backward_vacuum_profile(const FrequencyProfile& profile,
                                                         double omega,
                                                         const std::vector<double>& t1_list,
                                                         double t2, int nmax, double tol) {
  const auto pairs = solve_fundamental_grid(profile, t2, t1_list, tol);
  std::vector<BackwardVacuumPoint> out;
  out.reserve(t1_list.size());
  for (std::size_t i = 0; i < t1_list.size(); ++i) {
    const auto coeffs = vacuum_decay_coeffs(kernel(pairs[i]), omega, nmax);
    BackwardVacuumPoint pt;
    pt.t1 = t1_list[i];
    pt.overlap = std::abs(coeffs[0]);
    for (const auto& c : coeffs) pt.captured += std::norm(c);
    pt.region = classify_region(omega, t1_list[i], t2);
    out.push_back(pt);
  }
  return out;
}

}  // namespace tdho
