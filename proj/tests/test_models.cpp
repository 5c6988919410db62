#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "tdho/errors.hpp"
#include "tdho/models.hpp"
#include "tdho/special.hpp"

using namespace tdho;

TEST_CASE("closed forms agree with integration for every closed-form model") {
  const ModelSpec specs[] = {{ModelKind::constant, 2.0, 0.0}, {ModelKind::free, 0.0, 0.0},
                             {ModelKind::tachyonic, 0.8, 0.0}, {ModelKind::gowdy_t3, 1.0, 0.0},
                             {ModelKind::gowdy_t3, 6.5, 0.0},  {ModelKind::gowdy_s, 1.0, 0.0},
                             {ModelKind::gowdy_s, 7.3, 0.0}};
  for (const auto& m : specs) {
    CHECK(has_closed_form(m));
    for (auto [t0, t] : {std::pair{1.0, 2.0}, std::pair{2.4, 0.3}}) {
      const ClosedFormCheck r = check_closed_form(m, t0, t);
      CHECK_MESSAGE(r.max_abs_diff < 1e-8, m.name());
      CHECK(r.wronskian_error < 1e-12);
    }
  }
  CHECK_FALSE(has_closed_form({ModelKind::mathieu, 1.0, 0.2}));
}

TEST_CASE("3-torus closed form from the Bessel basis") {
  // u1 = sqrt(t) J0(w t), u2 = sqrt(t) Y0(w t) with W = 2/pi; s(t, t0) = (u1(t0)u2(t) - u2(t0)u1(t)) / W
  const double w = 2.0;
  const auto b0 = bessel01(w * 1.0);
  const auto b1 = bessel01(w * 2.5);
  const double s = std::sqrt(2.5) * (b0.j0 * b1.y0 - b0.y0 * b1.j0) / (2.0 / std::numbers::pi);
  CHECK(closed_form_pair({ModelKind::gowdy_t3, w, 0.0}, 1.0, 2.5).s == doctest::Approx(s).epsilon(1e-13));
}

TEST_CASE("canonical rho solves the Ermakov-Pinney equation") {
  const ModelSpec specs[] = {{ModelKind::gowdy_t3, 1.0, 0.0}, {ModelKind::gowdy_t3, 12.0, 0.0},
                             {ModelKind::gowdy_s, 1.0, 0.0}, {ModelKind::gowdy_s, 9.5, 0.0},
                             {ModelKind::constant, 3.0, 0.0}};
  for (const auto& m : specs) {
    for (RhoChoice ch : {RhoChoice::unit_weights, RhoChoice::balanced}) {
      if (m.kind != ModelKind::gowdy_s && ch == RhoChoice::balanced) continue;
      const EPSolution ep = canonical_ep(m, 1.0, ch);
      for (double t : {0.4, 1.0, 2.2}) {
        CHECK_MESSAGE(std::abs(ep_equation_residual(ep, t)) < 1e-6 * std::max(1.0, m.p1 * m.p1), m.name());
        // rho_dot against a central difference of rho
        const double h = 1e-5;
        const double fd = (ep.rho(t + h) - ep.rho(t - h)) / (2 * h);
        CHECK(std::abs(fd - ep(t).rho_dot) < 1e-7);
      }
    }
  }
}

TEST_CASE("canonical rho approaches omega^{-1/2}") {
  const double w = 400.0;
  CHECK(canonical_rho({ModelKind::gowdy_t3, w, 0.0}, 1.3).rho * std::sqrt(w) ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(canonical_rho({ModelKind::gowdy_s, w, 0.0}, 1.3, RhoChoice::balanced).rho * std::sqrt(w) ==
        doctest::Approx(1.0).epsilon(1e-4));
  CHECK(canonical_rho({ModelKind::constant, 9.0, 0.0}, 5.0).rho == doctest::Approx(1.0 / std::sqrt(3.0)));
  CHECK_THROWS_AS(canonical_rho({ModelKind::tachyonic, 1.0, 0.0}, 1.0), ContractError);
}

TEST_CASE("Mathieu monodromy and stability") {
  const Monodromy st = mathieu_monodromy(2.0, 0.3);
  CHECK(st.det == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(st.stable);
  const Monodromy un = mathieu_monodromy(1.0, 0.3);
  CHECK_FALSE(un.stable);
  CHECK(un.exponent.imag() > 0.0);
  const Monodromy fr = mathieu_monodromy(0.36, 0.0);
  CHECK(fr.exponent.real() == doctest::Approx(0.6).epsilon(1e-9));
}

TEST_CASE("Mathieu characteristic values match tabulated data") {
  // q = 1: a0 = -0.45513860, b1 = -0.11024882, a1 = 1.85910807
  CHECK(mathieu_characteristic_value(0.0, 1.0, -1.0, 0.0) == doctest::Approx(-0.45513860).epsilon(1e-7));
  CHECK(mathieu_characteristic_value(1.0, 1.0, -0.5, 0.3) == doctest::Approx(-0.11024882).epsilon(1e-6));
  CHECK(mathieu_characteristic_value(1.0, 1.0, 1.5, 2.2) == doctest::Approx(1.85910807).epsilon(1e-7));
  CHECK(mathieu_characteristic_value(0.7, 0.0, 0.0, 1.0) == doctest::Approx(0.49));
}

TEST_CASE("model names round trip") {
  for (auto k : {ModelKind::constant, ModelKind::free, ModelKind::tachyonic, ModelKind::mathieu,
                 ModelKind::gowdy_t3, ModelKind::gowdy_s}) {
    const ModelSpec m{k, 1.0, 0.5};
    CHECK(parse_model_kind(m.name()) == k);
  }
  CHECK_THROWS_AS(parse_model_kind("de_sitter"), ContractError);
}
