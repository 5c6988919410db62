#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <vector>

#include "output.hpp"
#include "scenario.hpp"
#include "tdho/classical.hpp"
#include "tdho/errors.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/field_theory.hpp"
#include "tdho/models.hpp"
#include "tdho/parallel.hpp"
#include "tdho/propagator.hpp"
#include "tdho/semiclassical.hpp"
#include "tdho/transitions.hpp"

namespace tdho::cli {

namespace {

constexpr double wronskian_limit = 1e-8;
constexpr double hyperbolic_limit = 1e-10;

// High modes accumulate Wronskian drift at the general default.
constexpr double field_tol = 1e-12;

double tolerance(ObjectReader& r, const Globals& g, double fallback = default_tol) {
  const double t = r.number("tol", fallback);
  return g.tol ? *g.tol : t;
}

int finish(const Manifest& m, const Globals& g, const std::string& name) {
  m.write(g.out / (name + ".json"));
  std::printf("%s: wrote %s.json (%s)\n", name.c_str(), name.c_str(),
              m.all_passed() ? "all checks passed" : "CHECK FAILED");
  return m.all_passed() ? 0 : 5;
}

json cjson(cplx z) { return json::array({z.real(), z.imag()}); }

json kernel_json(const KernelValue& k) {
  json j;
  j["regime"] = k.regime == KernelRegime::regular ? "regular" : "caustic";
  j["maslov_index"] = k.maslov_index;
  j["amplitude"] = cjson(k.amplitude);
  j["quad_tt"] = cjson(k.quad_tt);
  if (k.regime == KernelRegime::regular) {
    j["quad_00"] = cjson(k.quad_00);
    j["cross"] = cjson(k.cross);
  } else {
    j["delta_scale"] = k.delta_scale;
  }
  return j;
}

double kernel_distance(const KernelValue& a, const KernelValue& b) {
  if (a.regime != b.regime) return std::numeric_limits<double>::infinity();
  double d = std::max({std::abs(a.amplitude - b.amplitude), std::abs(a.quad_tt - b.quad_tt),
                       std::abs(a.quad_00 - b.quad_00), std::abs(a.cross - b.cross)});
  if (a.regime == KernelRegime::caustic) d = std::max(d, std::abs(a.delta_scale - b.delta_scale));
  return d;
}

// Closed-form s zeros are cheap to certify through a unit form over the profile.
std::vector<double> caustic_times(const FrequencyProfile& prof, double t0, double t, double tol) {
  const EPSolution ep = EPSolution::from_form(prof, t0, {}, tol);
  return t >= t0 ? locate_s_zeros(ep, t0, t0, t) : locate_s_zeros(ep, t0, t, t0);
}

}  // namespace

int run_solve(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const ProfileSpec ps = read_profile(r.object("profile"));
  const double t0 = r.number("t0");
  const std::vector<double> times = read_grid(r, "times");
  const double tol = tolerance(r, g);
  r.done();
  ps.require_time(t0);
  for (double t : times) ps.require_time(t);

  const auto grid = solve_fundamental_grid(ps.profile, t0, times, tol);
  Manifest m("solve", sc, tol);
  CsvWriter csv(g.out / "solve.csv",
                {"t", "c", "c_dot", "s", "s_dot", "wronskian_error", "zeros_s", "zeros_c"});
  double w_err = 0.0;
  double cf_err = 0.0;
  const bool closed = ps.model && has_closed_form(*ps.model);
  for (const auto& ip : grid) {
    const auto& p = ip.pair;
    const double we = std::abs(p.wronskian() - 1.0);
    w_err = std::max(w_err, we);
    if (closed) {
      const FundamentalPair e = closed_form_pair(*ps.model, t0, p.t);
      cf_err = std::max({cf_err, std::abs(e.c - p.c), std::abs(e.s - p.s),
                         std::abs(e.c_dot - p.c_dot), std::abs(e.s_dot - p.s_dot)});
    }
    csv.cell(p.t).cell(p.c).cell(p.c_dot).cell(p.s).cell(p.s_dot).cell(we);
    csv.cell(ip.index.zeros_s).cell(ip.index.zeros_c).end_row();
  }
  m.check("wronskian", w_err, wronskian_limit);
  if (closed) m.check("closed_form_agreement", cf_err, 1e-7);
  m.info()["profile"] = ps.profile.name();
  m.info()["points"] = times.size();
  return finish(m, g, "solve");
}

int run_propagate(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const ProfileSpec ps = read_profile(r.object("profile"));
  const double t0 = r.number("t0");
  const double t = r.number("t");
  const std::vector<double> qs = read_grid(r, "q");
  const std::vector<double> q0s = read_grid(r, "q0");
  const double tol = tolerance(r, g);
  std::vector<EPQuadraticForm> forms;
  json scales = json::array();
  if (r.has("ep_forms")) {
    const json& arr = r.raw("ep_forms");
    if (!arr.is_array()) throw UsageError("scenario.ep_forms: expected an array of forms");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      double scale = 1.0;
      forms.push_back(read_form(ObjectReader(arr[i], "scenario.ep_forms[" + std::to_string(i) + "]"), &scale));
      scales.push_back(scale);
    }
  }
  double theta_int = 0.0;
  bool shifted = false;
  if (r.has("theta")) {
    const std::vector<double> c = r.numbers("theta");
    theta_int = theta_integral(
        [c](double x) {
          double v = 0.0;
          for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
          return v;
        },
        t0, t);
    shifted = true;
  }
  std::optional<std::pair<cplx, cplx>> measure;
  if (r.has("measure")) {
    ObjectReader mr = r.object("measure");
    measure = {mr.complex("alpha"), mr.complex("beta")};
    mr.done();
  }
  std::optional<GaussianPacket> packet;
  if (r.has("packet")) {
    ObjectReader pr = r.object("packet");
    const cplx a = pr.complex("a");
    const cplx b = pr.has("b") ? pr.complex("b") : cplx{};
    pr.done();
    packet = GaussianPacket::normalized(a, b);
  }
  const bool pde = r.boolean("pde_check", false);
  r.done();
  ps.require_times({t0, t});

  Manifest m("propagate", sc, tol);
  const IndexedPair ip = solve_indexed(ps.profile, t0, t, tol);
  m.check("wronskian", std::abs(ip.pair.wronskian() - 1.0), wronskian_limit);
  KernelValue k = kernel(ip);
  if (!forms.empty()) {
    double d = 0.0;
    json per = json::array();
    for (const auto& f : forms) {
      const EPSolution ep = EPSolution::from_form(ps.profile, t0, f, tol);
      const double e = kernel_distance(kernel_via_factorization(ep, t0, t), k);
      per.push_back(e);
      d = std::max(d, e);
    }
    m.check("rho_independence", d, 1e-8);
    m.info()["ep_form_scales"] = scales;
    m.info()["rho_independence_per_form"] = per;
  }
  if (shifted) {
    k = kernel_shifted(k, theta_int);
    m.info()["theta_integral"] = theta_int;
  }
  if (measure) {
    k = kernel_measure_rep(k, measure->first, measure->second);
    m.info()["measure_vacuum_element"] = cjson(measure_vacuum_element(k, measure->first));
  }
  m.info()["kernel"] = kernel_json(k);
  m.info()["caustics"] = caustic_times(ps.profile, t0, t, tol);
  {
    CsvWriter csv(g.out / "propagate.csv", {"q", "q0", "re_k", "im_k"});
    if (k.regime == KernelRegime::regular) {
      for (double q : qs)
        for (double q0 : q0s) {
          const cplx v = k(q, q0);
          csv.cell(q).cell(q0).cell(v.real()).cell(v.imag()).end_row();
        }
    } else {
      // delta(q0 - delta_scale q) weight
      for (double q : qs) {
        const cplx v = k.amplitude * std::exp(k.exponent(q, 0.0));
        csv.cell(q).cell(k.delta_scale * q).cell(v.real()).cell(v.imag()).end_row();
      }
    }
  }
  if (packet) {
    if (measure) throw UsageError("scenario: packet evolution uses the standard representation; drop 'measure'");
    const GaussianPacket out = evolve_gaussian(*packet, k);
    CsvWriter csv(g.out / "propagate_packet.csv", {"q", "re_psi", "im_psi", "abs2"});
    for (double q : qs) {
      const cplx v = out(q);
      csv.cell(q).cell(v.real()).cell(v.imag()).cell(std::norm(v)).end_row();
    }
    m.check("packet_norm", std::abs(out.norm_squared() - 1.0), 1e-10);
    m.info()["packet"] = {{"a", cjson(out.a)}, {"b", cjson(out.b)}, {"log_norm", cjson(out.log_norm)}};
  }
  if (pde) {
    if (shifted || measure) throw UsageError("scenario: pde_check applies to the plain kernel");
    const double tt[] = {t};
    const double q0 = q0s.front();
    const PdeResidual res = pde_residual(ps.profile, t0, q0, qs, tt, 1e-3, tol);
    m.check("pde_residual", res.max_abs, 1e-3);
  }
  return finish(m, g, "propagate");
}

int run_transition(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const ProfileSpec ps = read_profile(r.object("profile"));
  const double t0 = r.number("t0");
  const double t = r.number("t");
  const double w1 = r.number("omega1");
  const double w2 = r.number("omega2", w1);
  const int n1max = r.integer("n1max");
  const int n2max = r.integer("n2max");
  const int quad_n = r.integer("quadrature_check", -1);
  const double tol = tolerance(r, g);
  r.done();
  if (n1max < 0 || n2max < 0) throw UsageError("scenario: n1max and n2max must be non-negative");
  ps.require_times({t0, t});

  Manifest m("transition", sc, tol);
  const IndexedPair ip = solve_indexed(ps.profile, t0, t, tol);
  m.check("wronskian", std::abs(ip.pair.wronskian() - 1.0), wronskian_limit);
  const KernelValue k = kernel(ip);
  const auto tab = transition_table(k, w1, w2, n1max, n2max);
  bool parity_ok = true;
  double worst_row = 0.0;
  json rows = json::array();
  CsvWriter csv(g.out / "transition.csv", {"n1", "n2", "re", "im", "abs2"});
  for (int a = 0; a <= n1max; ++a) {
    double sum = 0.0;
    for (int b = 0; b <= n2max; ++b) {
      const cplx v = tab[a][b];
      if ((a + b) % 2 && v != cplx(0.0)) parity_ok = false;
      sum += std::norm(v);
      csv.cell(a).cell(b).cell(v.real()).cell(v.imag()).cell(std::norm(v)).end_row();
    }
    rows.push_back(sum);
    worst_row = std::max(worst_row, sum);
  }
  m.check("parity_zeros", parity_ok ? 0.0 : 1.0, 0.0);
  m.check("row_sums_bounded", worst_row - 1.0, 1e-8);
  m.info()["row_sums"] = rows;
  if (w1 == w2) {
    const Bogoliubov bg = bogoliubov(ip.pair, w1);
    m.check("hyperbolic_identity", std::abs(std::norm(bg.A) - std::norm(bg.B) - 1.0), hyperbolic_limit);
    m.info()["bogoliubov"] = {{"A", cjson(bg.A)}, {"B", cjson(bg.B)}};
  }
  if (quad_n >= 0) {
    double e = 0.0;
    for (int a = 0; a <= std::min(quad_n, n1max); ++a)
      for (int b = 0; b <= std::min(quad_n, n2max); ++b)
        e = std::max(e, std::abs(tab[a][b] - transition_amplitude_quadrature(k, w1, w2, a, b)));
    m.check("quadrature_agreement", e, 1e-5);
  }
  m.info()["kernel"] = kernel_json(k);
  return finish(m, g, "transition");
}

int run_semiclassical(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const ProfileSpec ps = read_profile(r.object("profile"));
  const double t0 = r.number("t0");
  const std::vector<double> times = read_grid(r, "times");
  const cplx z = r.has("z") ? r.complex("z") : cplx{};
  const double tol = tolerance(r, g);
  std::optional<EPSolution> ep;
  const json& rho = r.raw("rho");
  if (rho.is_string()) {
    const std::string which = rho.get<std::string>();
    if (!ps.model) throw UsageError("scenario.rho: canonical rho needs a model profile");
    if (which == "canonical")
      ep = canonical_ep(*ps.model, t0, RhoChoice::unit_weights);
    else if (which == "canonical_balanced")
      ep = canonical_ep(*ps.model, t0, RhoChoice::balanced);
    else
      throw UsageError("scenario.rho: expected 'canonical', 'canonical_balanced' or a form");
  } else {
    ep = EPSolution::from_form(ps.profile, t0, read_form(ObjectReader(rho, "scenario.rho"), nullptr), tol);
  }
  r.done();
  ps.require_time(t0);
  for (double t : times) ps.require_time(t);

  Manifest m("semiclassical", sc, tol);
  const PhasePoint c0 = cauchy_data(*ep, z, t0);
  const auto grid = solve_fundamental_grid(ps.profile, t0, times, tol);
  double flow = 0.0, prod = 0.0, w_err = 0.0;
  CsvWriter csv(g.out / "semiclassical.csv", {"t", "q_mean", "p_mean", "dq", "dp", "dq_dp"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double t = times[i];
    const PhasePoint e = expectations(*ep, evolve_label(*ep, z, t0, t).z, t);
    const auto cl = grid[i].pair.apply(c0.q, c0.p);
    flow = std::max({flow, std::abs(cl[0] - e.q), std::abs(cl[1] - e.p)});
    w_err = std::max(w_err, std::abs(grid[i].pair.wronskian() - 1.0));
    const Uncertainties u = uncertainties(*ep, t);
    const RhoValue rv = (*ep)(t);
    prod = std::max(prod, std::abs(u.product - 0.5 * std::sqrt(1.0 + std::pow(rv.rho * rv.rho_dot, 2))));
    csv.cell(t).cell(e.q).cell(e.p).cell(u.dq).cell(u.dp).cell(u.product).end_row();
  }
  m.check("wronskian", w_err, wronskian_limit);
  m.check("classical_flow", flow, 1e-8);
  m.check("uncertainty_product", prod, 1e-10);
  m.info()["rho"] = ep->name();
  return finish(m, g, "semiclassical");
}

int run_models_validate(const json& sc, const Globals& g) {
  std::vector<ModelSpec> models;
  std::vector<std::pair<double, double>> spans;
  double tol = g.tol.value_or(default_tol);
  if (sc.is_null()) {
    models = {{ModelKind::constant, 2.0, 0.0}, {ModelKind::free, 0.0, 0.0},
              {ModelKind::tachyonic, 0.8, 0.0}, {ModelKind::gowdy_t3, 1.0, 0.0},
              {ModelKind::gowdy_t3, 10.0, 0.0}, {ModelKind::gowdy_s, 1.0, 0.0},
              {ModelKind::gowdy_s, 10.0, 0.0}};
    spans = {{1.0, 2.0}, {2.4, 0.3}};
  } else {
    ObjectReader r(sc, "scenario");
    const json& arr = r.raw("models");
    if (!arr.is_array()) throw UsageError("scenario.models: expected an array of profiles");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const ProfileSpec ps = read_profile(ObjectReader(arr[i], "scenario.models[" + std::to_string(i) + "]"));
      if (!ps.model || !has_closed_form(*ps.model))
        throw UsageError("scenario.models: only closed-form models can be validated");
      models.push_back(*ps.model);
    }
    const json& sp = r.raw("spans");
    if (!sp.is_array()) throw UsageError("scenario.spans: expected [[t0, t], ...]");
    for (const auto& p : sp) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number())
        throw UsageError("scenario.spans: expected [[t0, t], ...]");
      spans.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    tol = tolerance(r, g);
    r.done();
  }
  std::vector<ClosedFormCheck> res(models.size() * spans.size());
  parallel_for(res.size(), g.workers, [&](std::size_t i) {
    const auto& [t0, t] = spans[i % spans.size()];
    res[i] = check_closed_form(models[i / spans.size()], t0, t, tol);
  });
  Manifest m("models_validate", sc, tol);
  CsvWriter csv(g.out / "models_validate.csv",
                {"model", "p1", "p2", "t0", "t", "max_abs_diff", "wronskian_error", "pass"});
  double worst = 0.0, w_err = 0.0;
  for (std::size_t i = 0; i < res.size(); ++i) {
    const ModelSpec& md = models[i / spans.size()];
    const bool ok = res[i].max_abs_diff <= 1e-7 && res[i].wronskian_error <= 1e-12;
    worst = std::max(worst, res[i].max_abs_diff);
    w_err = std::max(w_err, res[i].wronskian_error);
    csv.cell(res[i].model).cell(md.p1).cell(md.p2).cell(res[i].t0).cell(res[i].t);
    csv.cell(res[i].max_abs_diff).cell(res[i].wronskian_error).cell(ok ? "pass" : "fail").end_row();
    std::printf("  %-10s p1=%-6g t0=%-6g t=%-6g diff=%.3e %s\n", res[i].model.c_str(), md.p1,
                res[i].t0, res[i].t, res[i].max_abs_diff, ok ? "pass" : "FAIL");
  }
  m.check("closed_form_agreement", worst, 1e-7);
  m.check("closed_form_wronskian", w_err, 1e-12);
  return finish(m, g, "models_validate");
}

namespace {

struct FieldScenario {
  ModeFamily family;
  Representation rep;
  double t0 = 0.0;
  double t = 0.0;
  FieldOptions opt;
};

FieldScenario read_field_common(ObjectReader& r, const Globals& g) {
  FieldScenario f;
  f.family.kind = parse_family_kind(r.string("family"));
  if (r.has("modes")) f.family.modes = r.integers("modes");
  f.t0 = r.number("t0");
  f.t = r.number("t");
  if (r.has("representation")) f.rep = read_representation(r.object("representation"));
  f.opt.source = read_source(r.string("source", "ode"));
  f.opt.tol = tolerance(r, g, field_tol);
  f.opt.workers = g.workers;
  const Interval iv = f.family.interval();
  if (!iv.contains(f.t0) || !iv.contains(f.t))
    throw DomainError("times must lie inside the family's interval");
  return f;
}

json fit_json(const TailFit& f) {
  return {{"identically_zero", f.identically_zero},
          {"non_finite", f.non_finite},
          {"exponent", f.exponent},
          {"ci_low", f.ci_low},
          {"ci_high", f.ci_high},
          {"blocks", f.blocks},
          {"verdict", verdict_name(f.verdict)}};
}

}  // namespace

int run_field_unitarity(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const FieldScenario f = read_field_common(r, g);
  const std::vector<int> schedule = r.integers("schedule");
  r.done();
  if (!std::is_sorted(schedule.begin(), schedule.end()) || schedule.empty())
    throw UsageError("scenario.schedule: expected an increasing list of cut-offs");

  const TruncationReport rep = unitarity_test(f.family, f.rep, f.t0, f.t, schedule, f.opt);
  Manifest m("field_unitarity", sc, f.opt.tol);
  {
    CsvWriter csv(g.out / "field_unitarity.csv", {"ell", "weight", "weighted_b2", "partial_sum"});
    double s = 0.0;
    for (std::size_t i = 0; i < rep.ells.size(); ++i) {
      s += rep.terms[i];
      csv.cell(rep.ells[i]).cell(f.family.weight(rep.ells[i])).cell(rep.terms[i]).cell(s).end_row();
    }
  }
  m.check("hyperbolic_identity", rep.max_hyperbolic_error, hyperbolic_limit);
  json& info = m.info();
  info["family"] = rep.family;
  info["schedule"] = rep.schedule;
  info["partial_sums"] = rep.partial_sums;
  info["fit"] = fit_json(rep.fit);
  info["verdict"] = verdict_name(rep.fit.verdict);
  info["tail_bound"] = rep.tail_bound;
  info["first_non_finite"] = rep.first_non_finite;
  try {
    const VacuumAmplitude v = vacuum_amplitude_magnitude(rep);
    info["vacuum_amplitude"] = {{"value", v.value}, {"lower_bound", v.lower}};
  } catch (const DomainError& e) {
    info["vacuum_amplitude"] = {{"refused", e.what()}};
  }
  std::printf("  verdict %s, fitted exponent %s [%s, %s]\n", verdict_name(rep.fit.verdict),
              fmt(rep.fit.exponent).c_str(), fmt(rep.fit.ci_low).c_str(), fmt(rep.fit.ci_high).c_str());
  return finish(m, g, "field_unitarity");
}

int run_field_factorize(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  const FieldScenario f = read_field_common(r, g);
  const int lmax = r.integer("lmax");
  const int comp_max = r.integer("composition_lmax", std::min(lmax, 200));
  r.done();
  if (lmax < 1) throw UsageError("scenario.lmax: must be positive");

  const ObstructionReport ob = factorization_obstruction(f.family, f.rep, f.t0, f.t, lmax, f.opt);
  const std::size_t n = ob.ells.size();
  std::vector<double> comp(n, std::numeric_limits<double>::quiet_NaN());
  parallel_for(n, f.opt.workers, [&](std::size_t i) {
    const int l = ob.ells[i];
    if (std::abs(l) > comp_max) return;
    const FactorBlocks fb = appendix_factors(f.family, f.rep, l, f.t0, f.t);
    const Bogoliubov d = mode_bogoliubov(mode_pair(f.family, l, f.t0, f.t, f.opt.source, f.opt.tol),
                                         f.rep.alpha(l), f.rep.beta(l));
    comp[i] = composition_error(fb, d);
  });
  Manifest m("field_factorize", sc, f.opt.tol);
  double worst = 0.0;
  {
    CsvWriter csv(g.out / "field_factorize.csv", {"ell", "rho_t", "uni_t", "uni_r", "uni_t_partial",
                                                  "uni_r_partial", "composition_error"});
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isnan(comp[i])) worst = std::max(worst, comp[i]);
      csv.cell(ob.ells[i]).cell(ob.rho_t[i]).cell(ob.uni_t[i]).cell(ob.uni_r[i]);
      csv.cell(ob.uni_t_partial[i]).cell(ob.uni_r_partial[i]).cell(comp[i]).end_row();
    }
  }
  if (f.family.kind != FamilyKind::tachyonic) m.check("composition", worst, 1e-8);
  json& info = m.info();
  info["family"] = f.family.name();
  info["max_uni_t"] = ob.max_uni_t;
  info["max_uni_r"] = ob.max_uni_r;
  info["fit_uni_t"] = fit_json(ob.fit_t);
  info["fit_uni_r"] = fit_json(ob.fit_r);
  info["rho_sqrt_ell_at_lmax"] = ob.rho_sqrt_ell_at_max;
  info["composition_lmax"] = comp_max;
  return finish(m, g, "field_factorize");
}

int run_field_variances(const json& sc, const Globals& g) {
  ObjectReader r(sc, "scenario");
  FieldScenario f;
  f.family.kind = parse_family_kind(r.string("family"));
  f.t0 = r.number("t0");
  if (r.has("representation")) f.rep = read_representation(r.object("representation"));
  f.opt.source = read_source(r.string("source", "ode"));
  f.opt.tol = tolerance(r, g, field_tol);
  f.opt.workers = g.workers;
  const std::vector<int> ells = r.integers("ells");
  // Both keys may be present; --sweep-t picks the grid.
  std::vector<double> grid;
  if (r.has("t_grid") || g.sweep_t) grid = read_grid(r, "t_grid");
  std::vector<double> single;
  if (r.has("t") || !g.sweep_t) single = {r.number("t")};
  const std::vector<double> times = g.sweep_t ? grid : single;
  r.done();
  const Interval iv = f.family.interval();
  if (!iv.contains(f.t0)) throw DomainError("t0 must lie inside the family's interval");
  for (double t : times)
    if (!iv.contains(t)) throw DomainError("times must lie inside the family's interval");

  struct Row {
    double t;
    int ell;
    CoherentVariances v;
    double hyp;
  };
  std::vector<Row> rows(ells.size() * times.size());
  parallel_for(ells.size(), f.opt.workers, [&](std::size_t j) {
    const int l = ells[j];
    const ModelSpec md = f.family.mode_model(l);
    std::vector<FundamentalPair> pairs;
    if (f.opt.source == PairSource::closed_form || md.kind == ModelKind::constant ||
        md.kind == ModelKind::tachyonic) {
      for (double t : times) pairs.push_back(closed_form_pair(md, f.t0, t));
    } else {
      for (const auto& ip : solve_fundamental_grid(md.profile(), f.t0, times, f.opt.tol))
        pairs.push_back(ip.pair);
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      const Bogoliubov b = mode_bogoliubov(pairs[i], f.rep.alpha(l), f.rep.beta(l));
      const double a2 = std::norm(b.A);
      rows[i * ells.size() + j] = {times[i], l, field_coherent_variances(b, f.rep.alpha(l), f.rep.beta(l)),
                                   std::abs(a2 - std::norm(b.B) - 1.0) / std::max(1.0, a2)};
    }
  });
  Manifest m("field_variances", sc, f.opt.tol);
  double hyp = 0.0;
  {
    CsvWriter csv(g.out / "field_variances.csv", {"t", "ell", "dq", "dp", "dq_scaled", "dp_scaled"});
    for (const Row& row : rows) {
      const double l = std::abs(row.ell);
      hyp = std::max(hyp, row.hyp);
      csv.cell(row.t).cell(row.ell).cell(row.v.dq).cell(row.v.dp);
      csv.cell(row.v.dq * std::sqrt(2.0 * l)).cell(row.v.dp * std::sqrt(2.0 / l)).end_row();
    }
  }
  m.check("hyperbolic_identity", hyp, hyperbolic_limit);
  m.info()["family"] = f.family.name();
  return finish(m, g, "field_variances");
}

int run_figures(const json& sc, const Globals& g) {
  const json empty = json::object();
  ObjectReader r(sc.is_null() ? empty : sc, "scenario");
  const double tol = tolerance(r, g, field_tol);
  double w1 = 1.0, t0_1 = 1.0;
  std::vector<double> ts1;
  if (r.has("fig1")) {
    ObjectReader f = r.object("fig1");
    w1 = f.number("omega", 1.0);
    t0_1 = f.number("t0", 1.0);
    if (f.has("times")) ts1 = read_grid(f, "times");
    f.done();
  }
  if (ts1.empty())
    for (int i = 0; i <= 120; ++i) ts1.push_back(1e-4 * std::pow(50.0 / 1e-4, i / 120.0));
  double wp = 5.0, t0_2 = std::numbers::pi / 2.0;
  std::vector<double> ts2;
  if (r.has("fig2")) {
    ObjectReader f = r.object("fig2");
    wp = f.number("omega_prime", 5.0);
    t0_2 = f.number("t0", t0_2);
    if (f.has("times")) ts2 = read_grid(f, "times");
    f.done();
  }
  if (ts2.empty())
    for (int i = 0; i <= 120; ++i) ts2.push_back(0.05 + (std::numbers::pi - 0.1) * i / 120.0);
  std::vector<int> ells3{10, 50, 100, 200, 500};
  double t0_3 = 0.5;
  std::vector<double> ts3;
  if (r.has("fig3")) {
    ObjectReader f = r.object("fig3");
    if (f.has("ells")) ells3 = f.integers("ells");
    t0_3 = f.number("t0", t0_3);
    if (f.has("times")) ts3 = read_grid(f, "times");
    f.done();
  }
  if (ts3.empty())
    for (int i = 0; i <= 60; ++i) ts3.push_back(0.6 + 2.4 * i / 60.0);
  r.done();
  if (!(wp > 1.0)) throw UsageError("scenario.fig2.omega_prime: must exceed 1");

  Manifest m("figures", sc, tol);
  // 3-torus oscillator, rho = sqrt(pi t (J0^2 + Y0^2) / 2)
  const EPSolution ep1 = canonical_ep({ModelKind::gowdy_t3, w1, 0.0}, t0_1);
  double dq_small = 0.0, plateau = 0.0;
  {
    CsvWriter csv(g.out / "fig1.csv", {"t", "dq", "dp", "dq_dp"});
    for (double t : ts1) {
      const Uncertainties u = uncertainties(ep1, t);
      csv.cell(t).cell(u.dq).cell(u.dp).cell(u.product).end_row();
    }
    dq_small = uncertainties(ep1, ts1.front()).dq;
    plateau = uncertainties(ep1, ts1.back()).product - 0.5;
  }
  m.check("fig1_dq_near_singularity", dq_small, 0.1);
  m.check("fig1_plateau", plateau, 1e-2);
  // 3-sphere oscillator with omega' = sqrt(1 + 4 omega^2)
  const double w2 = 0.5 * std::sqrt(wp * wp - 1.0);
  const EPSolution ep2 = canonical_ep({ModelKind::gowdy_s, w2, 0.0}, t0_2);
  double dq_max = 0.0;
  {
    CsvWriter csv(g.out / "fig2.csv", {"t", "dq", "dp", "dq_dp"});
    for (double t : ts2) {
      const Uncertainties u = uncertainties(ep2, t);
      dq_max = std::max(dq_max, u.dq);
      csv.cell(t).cell(u.dq).cell(u.dp).cell(u.product).end_row();
    }
  }
  m.check("fig2_dq_bounded", std::isfinite(dq_max) ? 0.0 : 1.0, 0.0);
  m.info()["fig2_dq_max"] = dq_max;
  // large-l variances on the 3-sphere family
  const ModeFamily fam{FamilyKind::gowdy_s, {}};
  const Representation rep;
  std::vector<std::vector<CoherentVariances>> var(ells3.size());
  parallel_for(ells3.size(), g.workers, [&](std::size_t j) {
    const int l = ells3[j];
    const auto grid = solve_fundamental_grid(fam.mode_profile(l), t0_3, ts3, tol);
    for (const auto& ip : grid)
      var[j].push_back(field_coherent_variances(mode_bogoliubov(ip.pair, rep.alpha(l), rep.beta(l)),
                                                rep.alpha(l), rep.beta(l)));
  });
  double worst_last = 0.0;
  {
    CsvWriter csv(g.out / "fig3.csv", {"t", "ell", "dq_scaled", "dp_scaled"});
    for (std::size_t i = 0; i < ts3.size(); ++i)
      for (std::size_t j = 0; j < ells3.size(); ++j) {
        const double l = std::abs(ells3[j]);
        const double a = var[j][i].dq * std::sqrt(2.0 * l);
        const double b = var[j][i].dp * std::sqrt(2.0 / l);
        if (j + 1 == ells3.size())
          worst_last = std::max({worst_last, std::abs(a - 1.0), std::abs(b - 1.0)});
        csv.cell(ts3[i]).cell(ells3[j]).cell(a).cell(b).end_row();
      }
  }
  m.check("fig3_largest_ell_ratio", worst_last, 0.05);
  return finish(m, g, "figures");
}

}  // namespace tdho::cli
