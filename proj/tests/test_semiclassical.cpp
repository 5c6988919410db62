#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "tdho/classical.hpp"
#include "tdho/errors.hpp"
#include "tdho/models.hpp"
#include "tdho/quadrature.hpp"
#include "tdho/semiclassical.hpp"

using namespace tdho;

namespace {

const cplx I(0.0, 1.0);

template <class F>
cplx evolve_by_kernel(const KernelValue& k, F&& psi0, double q) {
  return integrate([&](double q0) { return k(q, q0) * psi0(q0); }, -15.0, 15.0, 1e-12, 1e-14).value;
}

}  // namespace

TEST_CASE("coherent wavefunction is the eigenfunction series") {
  const auto prof = FrequencyProfile::mathieu(2.0, 0.3);
  const EPSolution ep = EPSolution::from_form(prof, 0.0, EPQuadraticForm::normalized(2.0, 0.4, 0.8));
  const cplx z(0.7, -0.4);
  for (double q : {-1.2, 0.1, 0.9}) {
    cplx series = 0.0;
    double fact = 1.0;
    for (int n = 0; n < 60; ++n) {
      if (n > 0) fact *= n;
      series += std::pow(z, n) / std::sqrt(fact) * lewis_eigenfunction(ep, n, 1.3, q);
    }
    series *= std::exp(-0.5 * std::norm(z));
    CHECK(std::abs(series - coherent_wavefunction(ep, z, 1.3, q)) < 1e-12);
  }
}

TEST_CASE("invariant eigenfunctions evolve by the phase integral") {
  const auto prof = FrequencyProfile::mathieu(2.0, 0.3);
  const EPSolution ep = EPSolution::from_form(prof, 0.0, EPQuadraticForm::normalized(1.5, -0.3, 1.0));
  const double t0 = 0.2, t = 2.4;
  const KernelValue k = kernel(prof, t0, t);
  const double phi = ep.phase_integral(t0, t);
  for (int n : {0, 1, 3}) {
    for (double q : {-0.7, 0.4}) {
      const cplx lhs = evolve_by_kernel(k, [&](double x) { return lewis_eigenfunction(ep, n, t0, x); }, q);
      const cplx rhs = std::exp(-I * (n + 0.5) * phi) * lewis_eigenfunction(ep, n, t, q);
      CHECK(std::abs(lhs - rhs) < 1e-8);
    }
  }
}

TEST_CASE("coherent states stay coherent") {
  const auto prof = FrequencyProfile::gowdy_t3(1.0);
  const EPSolution ep = canonical_ep({ModelKind::gowdy_t3, 1.0, 0.0}, 1.0);
  const cplx z(0.5, 0.8);
  const double t0 = 1.0, t = 2.0;
  const KernelValue k = kernel(prof, t0, t);
  const EvolvedLabel e = evolve_label(ep, z, t0, t);
  CHECK(std::abs(e.z) == doctest::Approx(std::abs(z)));
  for (double q : {-0.5, 0.3, 1.2}) {
    const cplx lhs = evolve_by_kernel(k, [&](double x) { return coherent_wavefunction(ep, z, t0, x); }, q);
    CHECK(std::abs(lhs - e.global_phase * coherent_wavefunction(ep, e.z, t, q)) < 1e-8);
  }
}

TEST_CASE("expectations follow the classical flow") {
  const auto prof = FrequencyProfile::mathieu(1.0, 0.3);
  const EPSolution ep = EPSolution::from_form(prof, 0.0, EPQuadraticForm::normalized(1.0, 0.2, 1.5));
  const cplx z(-0.3, 1.1);
  const double t0 = 0.5;
  const PhasePoint c0 = cauchy_data(ep, z, t0);
  const PhasePoint e0 = expectations(ep, z, t0);
  CHECK(c0.q == doctest::Approx(e0.q).epsilon(1e-14));
  CHECK(c0.p == doctest::Approx(e0.p).epsilon(1e-14));
  for (double t : {1.0, 4.0, 9.0}) {
    const auto cl = solve_fundamental(prof, t0, t).apply(c0.q, c0.p);
    const PhasePoint qm = expectations(ep, evolve_label(ep, z, t0, t).z, t);
    CHECK(std::abs(cl[0] - qm.q) < 1e-8);
    CHECK(std::abs(cl[1] - qm.p) < 1e-8);
  }
}

TEST_CASE("moments by quadrature") {
  const auto prof = FrequencyProfile::mathieu(2.0, 0.3);
  const EPSolution ep = EPSolution::from_form(prof, 0.0, EPQuadraticForm::normalized(2.0, 0.7, 1.0));
  const cplx z(0.4, -0.6);
  const double t = 1.7;
  auto psi = [&](double q) { return coherent_wavefunction(ep, z, t, q); };
  auto dpsi = [&](double q) {
    const double h = 1e-4;
    return (psi(q - 2 * h) - 8.0 * psi(q - h) + 8.0 * psi(q + h) - psi(q + 2 * h)) / (12.0 * h);
  };
  const double n = integrate([&](double q) { return std::norm(psi(q)); }, -12, 12, 1e-12).value;
  const double mq = integrate([&](double q) { return q * std::norm(psi(q)); }, -12, 12, 1e-12).value;
  const double mq2 = integrate([&](double q) { return q * q * std::norm(psi(q)); }, -12, 12, 1e-12).value;
  const double mp = integrate([&](double q) { return (std::conj(psi(q)) * -I * dpsi(q)).real(); }, -12, 12, 1e-12).value;
  const double mp2 = integrate([&](double q) { return std::norm(dpsi(q)); }, -12, 12, 1e-12).value;
  CHECK(n == doctest::Approx(1.0).epsilon(1e-11));
  const PhasePoint e = expectations(ep, z, t);
  CHECK(std::abs(mq - e.q) < 1e-10);
  CHECK(std::abs(mp - e.p) < 1e-8);
  const Uncertainties u = uncertainties(ep, t);
  CHECK(std::sqrt(mq2 - mq * mq) == doctest::Approx(u.dq).epsilon(1e-9));
  CHECK(std::sqrt(mp2 - mp * mp) == doctest::Approx(u.dp).epsilon(1e-7));
  const RhoValue r = ep(t);
  CHECK(u.product == doctest::Approx(0.5 * std::sqrt(1.0 + std::pow(r.rho * r.rho_dot, 2))).epsilon(1e-12));
}

TEST_CASE("uncertainty limits on the 3-torus") {
  const ModelSpec m{ModelKind::gowdy_t3, 1.0, 0.0};
  const EPSolution ep = canonical_ep(m, 1.0);
  CHECK(uncertainties(ep, 1e-6).dq < 0.05);
  CHECK(uncertainties(ep, 50.0).product - 0.5 < 1e-2);
}

TEST_CASE("regions") {
  CHECK(classify_region(100.0, 1e-4, 1.0) == Region::t0_plus);
  CHECK(classify_region(100.0, 0.5, 1.0) == Region::t_plus_plus);
  CHECK(classify_region(100.0, 0.01, 1.0) == Region::intermediate);
  CHECK(std::string(region_name(Region::t0_plus)) == "T0+");
  CHECK_THROWS_AS(classify_region(0.0, 1.0, 2.0), ContractError);
}

TEST_CASE("backward vacuum profile on the 3-torus") {
  const auto prof = FrequencyProfile::gowdy_t3(20.0);
  const std::vector<double> t1s{1e-4, 0.01, 1.0, 3.0};
  const auto pts = backward_vacuum_profile(prof, 20.0, t1s, 5.0);
  REQUIRE(pts.size() == 4);
  for (const auto& p : pts) {
    CHECK(p.captured <= 1.0 + 1e-8);
    CHECK(p.overlap * p.overlap <= p.captured + 1e-12);
  }
  CHECK(pts[0].region == Region::t0_plus);
  CHECK(pts[3].region == Region::t_plus_plus);
  CHECK(pts[3].overlap > 0.999);
  CHECK(pts[0].overlap < pts[3].overlap);
}
