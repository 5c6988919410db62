#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "tdho/classical.hpp"
#include "tdho/errors.hpp"
#include "tdho/quadrature.hpp"

using namespace tdho;

namespace {

FrequencyProfile as_numeric(double k0) {
  return FrequencyProfile::custom("numeric_constant", {}, [k0](double) { return k0; });
}

}  // namespace

TEST_CASE("constant profile closed forms") {
  const double w = 1.3;
  const FundamentalPair p = closed_form_constant(w * w, 0.4, 2.1);
  const double d = 1.7;
  CHECK(p.c == doctest::Approx(std::cos(w * d)).epsilon(1e-14));
  CHECK(p.s == doctest::Approx(std::sin(w * d) / w).epsilon(1e-14));
  CHECK(p.c_dot == doctest::Approx(-w * std::sin(w * d)).epsilon(1e-14));
  const FundamentalPair f = closed_form_constant(0.0, 1.0, 3.5);
  CHECK(f.c == 1.0);
  CHECK(f.s == doctest::Approx(2.5));
  const FundamentalPair h = closed_form_constant(-4.0, 0.0, 0.5);
  CHECK(h.c == doctest::Approx(std::cosh(1.0)));
  CHECK(h.s == doctest::Approx(std::sinh(1.0) / 2.0));
  CHECK_THROWS_AS(closed_form_constant(-1.0, 0.0, 1000.0), NumericError);
}

TEST_CASE("integrator reproduces constant-profile solutions") {
  for (double k0 : {2.25, 0.0, -0.49}) {
    for (double t : {2.7, -1.9}) {
      const FundamentalPair num = solve_fundamental(as_numeric(k0), 0.3, t);
      const FundamentalPair ex = closed_form_constant(k0, 0.3, t);
      CHECK(oracle::pair_distance(num, ex) < 1e-9);
      CHECK(std::abs(num.wronskian() - 1.0) < 1e-9);
    }
  }
}

TEST_CASE("integrator agrees with fixed-step RK4 on a Mathieu profile") {
  const FrequencyProfile m = FrequencyProfile::mathieu(2.0, 0.3);
  const FundamentalPair p = solve_fundamental(m, 0.0, 6.0);
  const FundamentalPair q = oracle::rk4_pair([&](double t) { return m.eval(t); }, 0.0, 6.0);
  CHECK(oracle::pair_distance(p, q) < 1e-9);
}

TEST_CASE("composition and inverse") {
  const FrequencyProfile m = FrequencyProfile::mathieu(1.1, 0.7);
  const FundamentalPair p10 = solve_fundamental(m, 0.2, 1.5);
  const FundamentalPair p21 = solve_fundamental(m, 1.5, 3.9);
  const FundamentalPair p20 = solve_fundamental(m, 0.2, 3.9);
  CHECK(oracle::pair_distance(compose_pair(p21, p10), p20) < 1e-8);
  const FundamentalPair back = solve_fundamental(m, 3.9, 0.2);
  CHECK(oracle::pair_distance(back, p20.inverse()) < 1e-8);
  CHECK_THROWS_AS(compose_pair(p10, p10), ContractError);
  const FundamentalPair id = solve_fundamental(m, 0.7, 0.7);
  CHECK(id.c == 1.0);
  CHECK(id.s == 0.0);
}

TEST_CASE("zero counts through Pruefer angles") {
  // s = sin t, c = cos t for t0 = 0, omega = 1
  const IndexedPair f = solve_indexed(as_numeric(1.0), 0.0, 10.0);
  CHECK(f.index.zeros_s == 3);
  CHECK(f.index.zeros_c == 3);
  const IndexedPair b = solve_indexed(as_numeric(1.0), 0.0, -10.0);
  CHECK(b.index.zeros_s == 3);
  CHECK(b.index.zeros_c == 3);
  const IndexedPair e = closed_form_constant_indexed(1.0, 0.0, 10.0);
  CHECK(e.index.zeros_s == 3);
  CHECK(e.index.zeros_c == 3);
  const IndexedPair g = solve_indexed(as_numeric(4.0), 1.0, 1.0 + 0.8 * std::numbers::pi);
  // s = sin(2 dt)/2 vanishes at dt = pi/2; c = cos(2 dt) at pi/4 and 3pi/4
  CHECK(g.index.zeros_s == 1);
  CHECK(g.index.zeros_c == 2);
}

TEST_CASE("zero counts agree with sampled index_of on a Mathieu profile") {
  const FrequencyProfile m = FrequencyProfile::mathieu(5.0, 1.2);
  std::vector<double> ts;
  for (int i = 1; i <= 4000; ++i) ts.push_back(0.1 + 9.0 * i / 4000.0);
  const std::vector<IndexedPair> grid = solve_fundamental_grid(m, 0.1, ts);
  std::vector<double> sv, cv;
  for (const auto& ip : grid) {
    sv.push_back(ip.pair.s);
    cv.push_back(ip.pair.c);
  }
  const ZeroCount zs = index_of(ts, sv, 0.1, 9.1);
  const ZeroCount zc = index_of(ts, cv, 0.1, 9.1);
  CHECK(zs.count == grid.back().index.zeros_s);
  CHECK(zc.count == grid.back().index.zeros_c);
  CHECK(zs.count > 3);
  const FundamentalPair last = solve_fundamental(m, 0.1, 9.1);
  CHECK(oracle::pair_distance(grid.back().pair, last) < 1e-9);
}

TEST_CASE("index_of on functions") {
  const ZeroCount z = index_of([](double t) { return std::sin(t); }, 0.0, 10.0, 200);
  CHECK(z.count == 3);
  REQUIRE(z.zeros.size() == 3);
  CHECK(z.zeros[1] == doctest::Approx(2.0 * std::numbers::pi).epsilon(1e-12));
  const ZeroCount e = index_of([](double t) { return std::sin(t); }, -1.0, -7.0, 50);
  CHECK(e.count == 2);
  std::vector<double> ts{0.0, 1.0, 2.0, 3.0};
  std::vector<double> us{1.0, 0.0, 1.0, -1.0};
  const ZeroCount tz = index_of(ts, us, 0.0, 3.0);
  CHECK(tz.count == 2);
  CHECK(tz.tangential == 1);
}

TEST_CASE("domain and singularity errors") {
  const FrequencyProfile g = FrequencyProfile::gowdy_t3(1.0);
  CHECK_THROWS_AS(solve_fundamental(g, 1.0, -0.5), DomainError);
  CHECK_THROWS_AS(g(0.0), DomainError);
  const FrequencyProfile bad = FrequencyProfile::custom(
      "blowup", {}, [](double t) { return -1.0 / std::pow(1.0 - t, 4); });
  CHECK_THROWS_AS(solve_fundamental(bad, 0.0, 2.0), SingularityError);
  try {
    solve_fundamental(bad, 0.0, 2.0);
  } catch (const SingularityError& e) {
    CHECK(e.last_time() > 0.99);
    CHECK(e.last_time() < 1.0);
  }
}

TEST_CASE("table profile interpolates monotone data") {
  std::vector<double> t{0.0, 1.0, 2.0, 3.0, 4.0};
  std::vector<double> k{1.0, 1.0, 1.0, 1.0, 1.0};
  const FrequencyProfile p = FrequencyProfile::table(t, k);
  CHECK(p(2.5) == doctest::Approx(1.0));
  CHECK_THROWS_AS(p(4.5), DomainError);
  const FundamentalPair a = solve_fundamental(p, 0.5, 3.5);
  CHECK(oracle::pair_distance(a, closed_form_constant(1.0, 0.5, 3.5)) < 1e-9);
}

TEST_CASE("branch power follows the real path") {
  const auto z = branch_power(-4.0, 1, 0.5);
  CHECK(std::abs(z - std::complex<double>(0.0, 2.0)) < 1e-15);
  const auto w = branch_power(2.0, 2, -0.5);
  CHECK(std::abs(w - std::complex<double>(-1.0 / std::sqrt(2.0), 0.0)) < 1e-15);
}

TEST_CASE("adaptive quadrature") {
  const auto r = integrate([](double x) { return std::exp(x); }, 0.0, 1.0);
  CHECK(r.value == doctest::Approx(std::numbers::e - 1.0).epsilon(1e-13));
  const auto o = integrate([](double x) { return std::cos(40.0 * x); }, 0.0, 3.0, 1e-12);
  CHECK(std::abs(o.value - std::sin(120.0) / 40.0) < 1e-12);
  const auto c = integrate([](double x) { return std::complex<double>(std::cos(x), std::sin(x)); },
                           0.0, std::numbers::pi);
  CHECK(std::abs(c.value - std::complex<double>(0.0, 2.0)) < 1e-12);
}

TEST_CASE("table profiles are integrated piece by piece") {
  std::vector<double> t, k;
  for (int i = 0; i <= 100; ++i) {
    t.push_back(0.05 * i);
    k.push_back(1.5 + 0.6 * std::sin(2.1 * t.back()));
  }
  const auto prof = FrequencyProfile::table(t, k);
  CHECK(prof.breakpoints().size() == 99);
  // RK4 steps aligned with the knots keep fourth order on each cubic piece
  const FundamentalPair ref = oracle::rk4_pair([&](double x) { return prof.eval(x); }, 0.2, 4.7, 9000);
  const FundamentalPair fwd = solve_fundamental(prof, 0.2, 4.7);
  CHECK(oracle::pair_distance(fwd, ref) < 1e-9);
  const FundamentalPair back = solve_fundamental(prof, 4.7, 0.2);
  CHECK(oracle::pair_distance(back, fwd.inverse()) < 1e-9);
}
