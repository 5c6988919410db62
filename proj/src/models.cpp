#include "tdho/models.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "tdho/errors.hpp"
#include "tdho/special.hpp"

namespace tdho {

namespace {

constexpr double pi = std::numbers::pi;

struct Basis {
  double u1, du1, u2, du2;
};

FundamentalPair pair_from_basis(const Basis& b0, const Basis& b, double t0, double t) {
  const double w = b0.u1 * b0.du2 - b0.du1 * b0.u2;
  FundamentalPair p;
  p.t0 = t0;
  p.t = t;
  p.c = (b0.du2 * b.u1 - b0.du1 * b.u2) / w;
  p.c_dot = (b0.du2 * b.du1 - b0.du1 * b.du2) / w;
  p.s = (b0.u1 * b.u2 - b0.u2 * b.u1) / w;
  p.s_dot = (b0.u1 * b.du2 - b0.u2 * b.du1) / w;
  return p;
}

void require_positive_omega(double w) {
  if (!(w > 0.0)) throw ContractError("closed forms need omega > 0");
}

// sqrt(t) J0(omega t), sqrt(t) Y0(omega t); Wronskian 2/pi.
Basis t3_basis(double omega, double t) {
  const BesselValues bv = bessel01(omega * t);
  const double st = std::sqrt(t);
  return {st * bv.j0, bv.j0 / (2.0 * st) - omega * st * bv.j1, st * bv.y0,
          bv.y0 / (2.0 * st) - omega * st * bv.y1};
}

double s_degree(double omega) { return 0.5 * (std::sqrt(1.0 + 4.0 * omega * omega) - 1.0); }

// sqrt(sin t) P_nu(cos t), sqrt(sin t) Q_nu(cos t); Wronskian -1.
Basis s_basis(double nu, double t) {
  const double x = std::cos(t);
  const double sn = std::sin(t);
  const FerrersValues f = ferrers_pq(nu, x);
  const double rs = std::sqrt(sn);
  return {rs * f.p, (0.5 * x * f.p - (nu + 1.0) * (x * f.p - f.p_next)) / rs, rs * f.q,
          (0.5 * x * f.q - (nu + 1.0) * (x * f.q - f.q_next)) / rs};
}

}  // namespace

FrequencyProfile ModelSpec::profile() const {
  switch (kind) {
    case ModelKind::constant:
      return FrequencyProfile::constant(p1);
    case ModelKind::free:
      return FrequencyProfile::constant(0.0);
    case ModelKind::tachyonic:
      return FrequencyProfile::constant(-p1 * p1);
    case ModelKind::mathieu:
      return FrequencyProfile::mathieu(p1, p2);
    case ModelKind::gowdy_t3:
      return FrequencyProfile::gowdy_t3(p1);
    case ModelKind::gowdy_s:
      return FrequencyProfile::gowdy_s(p1);
  }
  throw ContractError("unknown model kind");
}

std::string ModelSpec::name() const {
  switch (kind) {
    case ModelKind::constant:
      return "constant";
    case ModelKind::free:
      return "free";
    case ModelKind::tachyonic:
      return "tachyonic";
    case ModelKind::mathieu:
      return "mathieu";
    case ModelKind::gowdy_t3:
      return "gowdy_t3";
    case ModelKind::gowdy_s:
      return "gowdy_s";
  }
  return "unknown";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "constant") return ModelKind::constant;
  if (s == "free") return ModelKind::free;
  if (s == "tachyonic") return ModelKind::tachyonic;
  if (s == "mathieu") return ModelKind::mathieu;
  if (s == "gowdy_t3") return ModelKind::gowdy_t3;
  if (s == "gowdy_s") return ModelKind::gowdy_s;
  throw ContractError("unknown model kind '" + s + "'");
}

bool has_closed_form(const ModelSpec& m) { return m.kind != ModelKind::mathieu; }

FundamentalPair closed_form_pair(const ModelSpec& m, double t0, double t) {
  const FrequencyProfile prof = m.profile();
  prof.require_inside(t0, "t0");
  prof.require_inside(t, "t");
  switch (m.kind) {
    case ModelKind::constant:
    case ModelKind::free:
    case ModelKind::tachyonic:
      return closed_form_constant(prof.params()[0], t0, t);
    case ModelKind::gowdy_t3:
      require_positive_omega(m.p1);
      return pair_from_basis(t3_basis(m.p1, t0), t3_basis(m.p1, t), t0, t);
    case ModelKind::gowdy_s: {
      const double nu = s_degree(m.p1);
      return pair_from_basis(s_basis(nu, t0), s_basis(nu, t), t0, t);
    }
    case ModelKind::mathieu:
      break;
  }
  throw ContractError("model " + m.name() + " has no closed-form pair");
}

RhoValue canonical_rho(const ModelSpec& m, double t, RhoChoice choice) {
  const FrequencyProfile prof = m.profile();
  prof.require_inside(t, "t");
  switch (m.kind) {
    case ModelKind::constant:
      if (m.p1 > 0.0) return {std::pow(m.p1, -0.25), 0.0};
      break;
    case ModelKind::gowdy_t3: {
      require_positive_omega(m.p1);
      const BesselValues b = bessel01(m.p1 * t);
      const double sq = b.j0 * b.j0 + b.y0 * b.y0;
      const double r = std::sqrt(0.5 * pi * t * sq);
      const double d = pi / (4.0 * r) * (sq - 2.0 * m.p1 * t * (b.j0 * b.j1 + b.y0 * b.y1));
      return {r, d};
    }
    case ModelKind::gowdy_s: {
      const double nu = s_degree(m.p1);
      const double w1 = choice == RhoChoice::balanced ? 0.5 * pi : 1.0;
      const double w2 = choice == RhoChoice::balanced ? 2.0 / pi : 1.0;
      const double x = std::cos(t);
      const double sn = std::sin(t);
      const FerrersValues f = ferrers_pq(nu, x);
      const double sq = w1 * f.p * f.p + w2 * f.q * f.q;
      const double r = std::sqrt(sn * sq);
      const double d2 = x * sq - 2.0 * (nu + 1.0) *
                                     (w1 * f.p * (x * f.p - f.p_next) + w2 * f.q * (x * f.q - f.q_next));
      return {r, d2 / (2.0 * r)};
    }
    default:
      break;
  }
  throw ContractError("model " + m.name() + " has no canonical Ermakov-Pinney solution");
}

EPSolution canonical_ep(const ModelSpec& m, double anchor, RhoChoice choice) {
  (void)canonical_rho(m, anchor, choice);
  const ModelSpec copy = m;
  return EPSolution::closed_form(m.profile(), anchor, "canonical_" + m.name(),
                                 [copy, choice](double t) { return canonical_rho(copy, t, choice); });
}

Monodromy mathieu_monodromy(double a, double b, double tol) {
  Monodromy m;
  m.pair = solve_fundamental(FrequencyProfile::mathieu(a, b), 0.0, pi, tol);
  m.trace = m.pair.c + m.pair.s_dot;
  m.det = m.pair.wronskian();
  const double h = 0.5 * m.trace;
  if (std::abs(h) <= 1.0) {
    m.exponent = std::acos(h) / pi;
    m.stable = true;
  } else if (h > 1.0) {
    m.exponent = {0.0, std::acosh(h) / pi};
  } else {
    m.exponent = {1.0, std::acosh(-h) / pi};
  }
  return m;
}

double mathieu_characteristic_value(double r, double b, double a_lo, double a_hi, double tol) {
  if (b == 0.0) return r * r;
  if (!(a_lo < a_hi)) throw ContractError("characteristic value bracket is empty");
  const double target = 2.0 * std::cos(pi * r);
  auto f = [&](double a) { return mathieu_monodromy(a, b, tol).trace - target; };
  const double f_lo = f(a_lo);
  const double f_hi = f(a_hi);
  if (f_lo == 0.0) return a_lo;
  if (f_hi == 0.0) return a_hi;
  if ((f_lo > 0.0) == (f_hi > 0.0))
    throw NumericError("characteristic value bracket does not straddle a root");
  boost::uintmax_t iters = 200;
  auto stop = [](double x, double y) { return std::abs(x - y) <= 1e-14 * std::max(1.0, std::abs(x)); };
  const auto r_ab = boost::math::tools::toms748_solve(f, a_lo, a_hi, f_lo, f_hi, stop, iters);
  return 0.5 * (r_ab.first + r_ab.second);
}

ClosedFormCheck check_closed_form(const ModelSpec& m, double t0, double t, double tol) {
  const FundamentalPair cf = closed_form_pair(m, t0, t);
  FundamentalPair num;
  if (m.kind == ModelKind::constant || m.kind == ModelKind::free || m.kind == ModelKind::tachyonic) {
    const double k0 = m.profile().params()[0];
    auto prof = FrequencyProfile::custom(m.name(), {}, [k0](double) { return k0; });
    num = solve_fundamental(prof, t0, t, tol);
  } else {
    num = solve_fundamental(m.profile(), t0, t, tol);
  }
  ClosedFormCheck r{m.name(), t0, t, 0.0, std::abs(cf.wronskian() - 1.0)};
  r.max_abs_diff = std::max({std::abs(cf.c - num.c), std::abs(cf.s - num.s),
                             std::abs(cf.c_dot - num.c_dot), std::abs(cf.s_dot - num.s_dot)});
  return r;
}

}  // namespace tdho
