#include "tdho/ermakov_pinney.hpp"

#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "tdho/errors.hpp"
#include "tdho/quadrature.hpp"

namespace tdho {

namespace {

constexpr double node_spacing = 0.25;
constexpr double phase_rel_tol = 1e-12;
// Form-based phases only use quadrature to choose the branch of arg u.
constexpr double branch_rel_tol = 1e-6;

}  // namespace

EPQuadraticForm EPQuadraticForm::normalized(double a11, double a12, double a22, double* scale) {
  if (!std::isfinite(a11) || !std::isfinite(a12) || !std::isfinite(a22))
    throw ContractError("EP form entries must be finite");
  const double d = a11 * a22 - a12 * a12;
  if (!(a11 > 0.0) || !(d > 0.0)) throw ContractError("EP form must be positive definite");
  const double f = 1.0 / std::sqrt(d);
  if (scale) *scale = f;
  return {a11 * f, a12 * f, a22 * f};
}

struct EPSolution::State {
  FrequencyProfile profile;
  double anchor;
  std::string name;
  bool has_form = false;
  EPQuadraticForm form;
  double tol = default_tol;
  std::function<RhoValue(double)> rho_fn;

  std::mutex mu;
  // Checkpoints k = 0, +-1, ... at anchor + k * node_spacing.
  std::map<long, FundamentalPair> pair_nodes;
  std::map<long, double> phase_nodes;  // int_anchor^{node} rho^-2

  State(FrequencyProfile p, double a) : profile(std::move(p)), anchor(a) {}

  long node_of(double t) const {
    return static_cast<long>(std::trunc((t - anchor) / node_spacing));
  }
  double node_time(long k) const { return anchor + static_cast<double>(k) * node_spacing; }

  FundamentalPair pair_node(long k) {
    {
      std::lock_guard<std::mutex> lk(mu);
      auto it = pair_nodes.find(k);
      if (it != pair_nodes.end()) return it->second;
    }
    FundamentalPair p;
    if (k == 0) {
      p = {anchor, anchor, 1.0, 0.0, 0.0, 1.0};
    } else {
      const long prev = k > 0 ? k - 1 : k + 1;
      const FundamentalPair start = pair_node(prev);
      FundamentalIntegrator integ(profile, start, tol);
      integ.advance_to(node_time(k));
      p = integ.pair();
    }
    std::lock_guard<std::mutex> lk(mu);
    pair_nodes.emplace(k, p);
    return p;
  }

  FundamentalPair pair_at(double t) {
    const long k = node_of(t);
    const FundamentalPair start = pair_node(k);
    if (start.t == t) return start;
    FundamentalIntegrator integ(profile, start, tol);
    integ.advance_to(t);
    return integ.pair();
  }

  RhoValue eval(double t) {
    if (!has_form) return rho_fn(t);
    const FundamentalPair p = pair_at(t);
    const double r2 = form.a11 * p.c * p.c + form.a22 * p.s * p.s + 2.0 * form.a12 * p.s * p.c;
    const double r = std::sqrt(r2);
    const double d = form.a11 * p.c * p.c_dot + form.a22 * p.s * p.s_dot +
                     form.a12 * (p.c_dot * p.s + p.c * p.s_dot);
    return {r, d / r};
  }

  double segment_phase(double a, double b) {
    if (a == b) return 0.0;
    auto f = [this](double t) {
      const double r = eval(t).rho;
      return 1.0 / (r * r);
    };
    return integrate(f, a, b, has_form ? branch_rel_tol : phase_rel_tol, 0.0, 20000).value;
  }

  // u = x c + y s with x = sqrt(a11), y = (a12 + i) / sqrt(a11) has |u| = rho and
  // (arg u)' = W / rho^2 = 1 / rho^2, so the phase from the anchor is arg u up to 2 pi k.
  double exact_phase(double t, double estimate) {
    const FundamentalPair p = pair_at(t);
    const double x = std::sqrt(form.a11);
    const double re = x * p.c + form.a12 / x * p.s;
    const double im = p.s / x;
    const double a = std::atan2(im, re);
    return a + 2.0 * std::numbers::pi * std::round((estimate - a) / (2.0 * std::numbers::pi));
  }

  double phase_node(long k) {
    {
      std::lock_guard<std::mutex> lk(mu);
      auto it = phase_nodes.find(k);
      if (it != phase_nodes.end()) return it->second;
    }
    double v = 0.0;
    if (k != 0) {
      const long prev = k > 0 ? k - 1 : k + 1;
      v = phase_node(prev) + segment_phase(node_time(prev), node_time(k));
      if (has_form) v = exact_phase(node_time(k), v);
    }
    std::lock_guard<std::mutex> lk(mu);
    phase_nodes.emplace(k, v);
    return v;
  }

  double phase_from_anchor(double t) {
    const long k = node_of(t);
    const double v = phase_node(k) + segment_phase(node_time(k), t);
    return has_form ? exact_phase(t, v) : v;
  }
};

EPSolution EPSolution::from_form(const FrequencyProfile& profile, double anchor,
                                 EPQuadraticForm form, double tol) {
  profile.require_inside(anchor, "EP anchor");
  if (!(form.a11 > 0.0) || std::abs(form.det() - 1.0) > 1e-12)
    throw ContractError("EP form must be positive definite with unit determinant");
  EPSolution ep;
  ep.st_ = std::make_shared<State>(profile, anchor);
  ep.st_->name = "form";
  ep.st_->has_form = true;
  ep.st_->form = form;
  ep.st_->tol = tol;
  return ep;
}

EPSolution EPSolution::closed_form(const FrequencyProfile& profile, double anchor,
                                   std::string name, std::function<RhoValue(double)> rho) {
  profile.require_inside(anchor, "EP anchor");
  if (!rho) throw ContractError("closed-form EP needs a rho function");
  EPSolution ep;
  ep.st_ = std::make_shared<State>(profile, anchor);
  ep.st_->name = std::move(name);
  ep.st_->rho_fn = std::move(rho);
  return ep;
}

const FrequencyProfile& EPSolution::profile() const { return st_->profile; }
double EPSolution::anchor() const { return st_->anchor; }
const std::string& EPSolution::name() const { return st_->name; }
bool EPSolution::has_form() const { return st_->has_form; }
const EPQuadraticForm& EPSolution::form() const { return st_->form; }

RhoValue EPSolution::operator()(double t) const {
  st_->profile.require_inside(t, "t");
  const RhoValue v = st_->eval(t);
  if (!(v.rho > 0.0) || !std::isfinite(v.rho) || !std::isfinite(v.rho_dot))
    throw NumericError("EP solution lost positivity or finiteness");
  return v;
}

double EPSolution::rho_ddot(double t) const {
  st_->profile.require_inside(t, "t");
  if (st_->has_form) {
    const FundamentalPair p = st_->pair_at(t);
    const auto& a = st_->form;
    const double k = st_->profile.eval(t);
    const RhoValue v = st_->eval(t);
    const double f2 = a.a11 * (p.c_dot * p.c_dot - k * p.c * p.c) +
                      a.a22 * (p.s_dot * p.s_dot - k * p.s * p.s) +
                      a.a12 * (2.0 * p.c_dot * p.s_dot - 2.0 * k * p.c * p.s);
    return (f2 - v.rho_dot * v.rho_dot) / v.rho;
  }
  const double h = 1e-3 * std::max(1.0, std::abs(t)) * 1e-1;
  auto d = [this](double x) { return (*this)(x).rho_dot; };
  return (-d(t + 2 * h) + 8 * d(t + h) - 8 * d(t - h) + d(t - 2 * h)) / (12 * h);
}

double EPSolution::phase_integral(double t0, double t) const {
  st_->profile.require_inside(t0, "t0");
  st_->profile.require_inside(t, "t");
  if (t0 == t) return 0.0;
  return st_->phase_from_anchor(t) - st_->phase_from_anchor(t0);
}

double phase_integral(const EPSolution& ep, double t0, double t) {
  return ep.phase_integral(t0, t);
}

FundamentalPair fundamental_from_ep(const EPSolution& ep, double t0, double t) {
  const RhoValue r0 = ep(t0);
  const RhoValue r = ep(t);
  const double phi = ep.phase_integral(t0, t);
  const double cp = std::cos(phi);
  const double sp = std::sin(phi);
  FundamentalPair p;
  p.t0 = t0;
  p.t = t;
  p.c = (r.rho / r0.rho) * cp - r.rho * r0.rho_dot * sp;
  p.s = r.rho * r0.rho * sp;
  p.s_dot = (r0.rho / r.rho) * cp + r0.rho * r.rho_dot * sp;
  p.c_dot = (r.rho_dot / r0.rho - r0.rho_dot / r.rho) * cp -
            (1.0 / (r.rho * r0.rho) + r.rho_dot * r0.rho_dot) * sp;
  return p;
}

std::vector<double> locate_s_zeros(const EPSolution& ep, double t0, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw ContractError("locate_s_zeros: empty window");
  constexpr double pi = std::numbers::pi;
  const double p_lo = ep.phase_integral(t0, t_lo);
  const double p_hi = ep.phase_integral(t0, t_hi);
  std::vector<double> zeros;
  // Phi is increasing in t; the window is (t_lo, t_hi]
  const long k_first = static_cast<long>(std::floor(p_lo / pi)) + 1;
  const long k_last = static_cast<long>(std::floor(p_hi / pi));
  for (long k = k_first; k <= k_last; ++k) {
    if (k == 0) continue;
    const double target = k * pi;
    auto f = [&](double x) { return ep.phase_integral(t0, x) - target; };
    double a = t_lo;
    double b = t_hi;
    if (!zeros.empty()) a = std::max(a, zeros.back());
    const double fb = f(b);
    if (fb == 0.0) {
      zeros.push_back(b);
      continue;
    }
    boost::uintmax_t iters = 200;
    auto tol = [](double x, double y) {
      return std::abs(x - y) <= 4e-15 * std::max(1.0, std::abs(x));
    };
    auto r = boost::math::tools::toms748_solve(f, a, b, f(a), fb, tol, iters);
    zeros.push_back(0.5 * (r.first + r.second));
  }
  return zeros;
}

double ep_equation_residual(const EPSolution& ep, double t) {
  const RhoValue v = ep(t);
  return ep.rho_ddot(t) + ep.profile()(t) * v.rho - 1.0 / (v.rho * v.rho * v.rho);
}

}  // namespace tdho
