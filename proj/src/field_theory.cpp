#include "tdho/field_theory.hpp"

#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "tdho/errors.hpp"
#include "tdho/parallel.hpp"
#include "tdho/propagator.hpp"

namespace tdho {

namespace {

using cd = std::complex<double>;
const cd I(0.0, 1.0);

void require_mode(int ell) {
  if (ell == 0) throw ContractError("mode l = 0 has no standard representation");
}

}  // namespace

std::string ModeFamily::name() const {
  switch (kind) {
    case FamilyKind::minkowski:
      return "minkowski";
    case FamilyKind::gowdy_t3:
      return "gowdy_t3";
    case FamilyKind::gowdy_s:
      return "gowdy_s";
    case FamilyKind::tachyonic:
      return "tachyonic";
  }
  return "unknown";
}

FamilyKind parse_family_kind(const std::string& s) {
  if (s == "minkowski") return FamilyKind::minkowski;
  if (s == "gowdy_t3") return FamilyKind::gowdy_t3;
  if (s == "gowdy_s") return FamilyKind::gowdy_s;
  if (s == "tachyonic") return FamilyKind::tachyonic;
  throw ContractError("unknown mode family '" + s + "'");
}

double ModeFamily::weight(int ell) const {
  (void)ell;
  if (!modes.empty()) return 1.0;
  return kind == FamilyKind::gowdy_s ? 1.0 : 2.0;
}

ModelSpec ModeFamily::mode_model(int ell) const {
  require_mode(ell);
  const double l = std::abs(static_cast<double>(ell));
  switch (kind) {
    case FamilyKind::minkowski:
      return {ModelKind::constant, l * l, 0.0};
    case FamilyKind::gowdy_t3:
      return {ModelKind::gowdy_t3, l, 0.0};
    case FamilyKind::gowdy_s:
      if (ell < 0) throw ContractError("3-sphere modes are labelled by l >= 0");
      return {ModelKind::gowdy_s, std::sqrt(l * (l + 1.0)), 0.0};
    case FamilyKind::tachyonic:
      return {ModelKind::tachyonic, l, 0.0};
  }
  throw ContractError("unknown family");
}

Interval ModeFamily::interval() const {
  switch (kind) {
    case FamilyKind::gowdy_t3:
      return {0.0, std::numeric_limits<double>::infinity()};
    case FamilyKind::gowdy_s:
      return {0.0, std::numbers::pi};
    default:
      return {};
  }
}

std::vector<int> ModeFamily::modes_up_to(int lmax) const {
  std::vector<int> out;
  if (!modes.empty()) {
    for (int l : modes)
      if (std::abs(l) <= lmax) out.push_back(l);
    return out;
  }
  for (int l = 1; l <= lmax; ++l) out.push_back(l);
  return out;
}

cd Representation::alpha(int ell) const {
  require_mode(ell);
  const double l = std::abs(static_cast<double>(ell));
  const cd a = 1.0 / std::sqrt(2.0 * l);
  return phase ? a * std::exp(I * phase(ell)) : a;
}

cd Representation::beta(int ell) const {
  require_mode(ell);
  const double l = std::abs(static_cast<double>(ell));
  const cd b = -I * std::sqrt(0.5 * l);
  return phase ? b * std::exp(I * phase(ell)) : b;
}

FundamentalPair mode_pair(const ModeFamily& fam, int ell, double t0, double t, PairSource source,
                          double tol) {
  const ModelSpec m = fam.mode_model(ell);
  if (source == PairSource::closed_form || m.kind == ModelKind::constant ||
      m.kind == ModelKind::tachyonic)
    return closed_form_pair(m, t0, t);
  return solve_fundamental(m.profile(), t0, t, tol);
}

Bogoliubov mode_bogoliubov(const FundamentalPair& p, cd alpha, cd beta) {
  const cd ab = std::conj(alpha) * beta;
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const cd A = I * (p.s_dot * ab - p.c * std::conj(ab) + p.c_dot * a2 - p.s * b2);
  const cd B = I * ((p.s_dot - p.c) * std::conj(alpha) * std::conj(beta) +
                    p.c_dot * std::conj(alpha) * std::conj(alpha) -
                    p.s * std::conj(beta) * std::conj(beta));
  return {A, B};
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::convergent:
      return "convergent";
    case Verdict::divergent:
      return "divergent";
    default:
      return "inconclusive";
  }
}

TailFit fit_tail(const std::vector<double>& terms) {
  TailFit fit;
  const int L = static_cast<int>(terms.size());
  double biggest = 0.0;
  for (double v : terms) {
    if (!std::isfinite(v)) {
      fit.non_finite = true;
      fit.verdict = Verdict::divergent;
      return fit;
    }
    biggest = std::max(biggest, std::abs(v));
  }
  if (biggest <= zero_term_threshold) {
    fit.identically_zero = true;
    fit.exponent = std::numeric_limits<double>::infinity();
    fit.ci_low = fit.ci_high = fit.exponent;
    fit.verdict = Verdict::convergent;
    return fit;
  }
  // block means over geometric blocks [e_k, e_{k+1}) of ratio sqrt 2
  std::vector<double> xs;
  std::vector<double> ys;
  int e = std::max(8, L / 256);
  while (true) {
    int next = std::max(e + 1, static_cast<int>(std::lround(e * std::numbers::sqrt2)));
    if (next - 1 > L) break;
    double sum = 0.0;
    for (int l = e; l < next; ++l) sum += terms[l - 1];
    const double mean = sum / (next - e);
    if (mean > 0.0) {
      xs.push_back(0.5 * (std::log(static_cast<double>(e)) + std::log(next - 1.0)));
      ys.push_back(std::log(mean));
    }
    e = next;
  }
  fit.blocks = static_cast<int>(xs.size());
  if (fit.blocks < 4) return fit;
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double icept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (icept + slope * xs[i]);
    rss += r * r;
  }
  const double se = std::sqrt(rss / (n - 2.0) / sxx);
  const boost::math::students_t_distribution<double> dist(n - 2.0);
  const double q = boost::math::quantile(dist, 0.975);
  fit.slope = slope;
  fit.log_c = icept;
  fit.exponent = -slope;
  fit.ci_low = -slope - q * se;
  fit.ci_high = -slope + q * se;
  if (fit.ci_low > 1.0)
    fit.verdict = Verdict::convergent;
  else if (fit.ci_high < 1.0)
    fit.verdict = Verdict::divergent;
  return fit;
}

TruncationReport unitarity_test(const ModeFamily& fam, const Representation& rep, double t0,
                                double t, const std::vector<int>& schedule,
                                const FieldOptions& opt) {
  if (schedule.empty()) throw ContractError("unitarity_test: empty schedule");
  const int lmax = *std::max_element(schedule.begin(), schedule.end());
  if (lmax < 1) throw ContractError("unitarity_test: schedule must contain positive cut-offs");
  TruncationReport rep_out;
  rep_out.family = fam.name();
  rep_out.t0 = t0;
  rep_out.t = t;
  rep_out.schedule = schedule;
  rep_out.ells = fam.modes_up_to(lmax);
  const std::size_t n = rep_out.ells.size();
  std::vector<double> b2(n, 0.0);
  std::vector<double> hyp(n, 0.0);
  parallel_for(n, opt.workers, [&](std::size_t i) {
    const int l = rep_out.ells[i];
    try {
      const FundamentalPair p = mode_pair(fam, l, t0, t, opt.source, opt.tol);
      const Bogoliubov ab = mode_bogoliubov(p, rep.alpha(l), rep.beta(l));
      const double a2 = std::norm(ab.A);
      b2[i] = std::norm(ab.B);
      if (std::isfinite(a2) && std::isfinite(b2[i]))
        hyp[i] = std::abs(a2 - b2[i] - 1.0) / std::max(1.0, a2);
    } catch (const NumericError&) {
      b2[i] = std::numeric_limits<double>::infinity();
    }
  });
  rep_out.terms.resize(n);
  double log_a = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = fam.weight(rep_out.ells[i]);
    rep_out.terms[i] = w * b2[i];
    if (!std::isfinite(b2[i]) && rep_out.first_non_finite == 0) rep_out.first_non_finite = rep_out.ells[i];
    log_a += w * std::log1p(b2[i]);
    rep_out.max_hyperbolic_error = std::max(rep_out.max_hyperbolic_error, hyp[i]);
  }
  for (int cut : schedule) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      if (std::abs(rep_out.ells[i]) <= cut) s += rep_out.terms[i];
    rep_out.partial_sums.push_back(s);
  }
  if (fam.modes.empty()) {
    rep_out.fit = fit_tail(rep_out.terms);
  } else {
    rep_out.fit.verdict = Verdict::convergent;
    for (double v : rep_out.terms)
      if (!std::isfinite(v)) rep_out.fit.verdict = Verdict::divergent;
  }
  const auto& f = rep_out.fit;
  if (f.identically_zero || !fam.modes.empty()) {
    rep_out.tail_bound = 0.0;
  } else if (f.verdict == Verdict::convergent) {
    const double p = f.exponent;
    rep_out.tail_bound = std::exp(f.log_c) * std::pow(static_cast<double>(lmax), 1.0 - p) / (p - 1.0);
  } else {
    rep_out.tail_bound = std::numeric_limits<double>::infinity();
  }
  rep_out.vacuum_magnitude = std::exp(-0.25 * log_a);
  rep_out.vacuum_lower = rep_out.vacuum_magnitude * std::exp(-0.25 * rep_out.tail_bound);
  return rep_out;
}

VacuumAmplitude vacuum_amplitude_magnitude(const TruncationReport& report) {
  if (report.fit.verdict != Verdict::convergent)
    throw DomainError(std::string("vacuum amplitude undefined: mode sum verdict is ") +
                      verdict_name(report.fit.verdict));
  return {report.vacuum_magnitude, report.vacuum_lower};
}

KernelValue field_kernel_factor(const ModeFamily& fam, const Representation& rep, int ell,
                                double t0, double t, double theta_int, const FieldOptions& opt) {
  const FrequencyProfile prof = fam.mode_profile(ell);
  const KernelValue k = kernel(solve_indexed(prof, t0, t, opt.tol));
  return kernel_shifted(kernel_measure_rep(k, rep.alpha(ell), rep.beta(ell)), theta_int);
}

EPSolution mode_ep(const ModeFamily& fam, int ell, double t0) {
  const ModelSpec m = fam.mode_model(ell);
  switch (fam.kind) {
    case FamilyKind::minkowski:
    case FamilyKind::gowdy_t3:
      return canonical_ep(m, t0);
    case FamilyKind::gowdy_s:
      return canonical_ep(m, t0, RhoChoice::balanced);
    case FamilyKind::tachyonic: {
      const double l = std::abs(static_cast<double>(ell));
      return EPSolution::closed_form(m.profile(), t0, "tachyonic_mode", [l, t0](double x) {
        const FundamentalPair p = closed_form_constant(-l * l, t0, x);
        const double r = std::sqrt(p.c * p.c / l + l * p.s * p.s);
        return RhoValue{r, (p.c * p.c_dot / l + l * p.s * p.s_dot) / r};
      });
    }
  }
  throw ContractError("unknown family");
}

ObstructionReport factorization_obstruction(const ModeFamily& fam, const Representation& rep,
                                            double t0, double t, int lmax,
                                            const FieldOptions& opt) {
  ObstructionReport out;
  out.family = fam.name();
  out.ells = fam.modes_up_to(lmax);
  const std::size_t n = out.ells.size();
  out.uni_t.assign(n, 0.0);
  out.uni_r.assign(n, 0.0);
  out.rho_t.assign(n, 0.0);
  auto& rho_t = out.rho_t;
  parallel_for(n, opt.workers, [&](std::size_t i) {
    const int l = out.ells[i];
    const EPSolution ep = mode_ep(fam, l, t0);
    const RhoValue r = ep(t);
    const double phi = ep.phase_integral(t0, t);
    const cd a = rep.alpha(l);
    const cd b = rep.beta(l);
    out.uni_t[i] = std::norm(a * b * (r.rho - 1.0 / r.rho) - a * a * r.rho_dot);
    out.uni_r[i] = std::norm((a * a + b * b) * std::sin(phi));
    rho_t[i] = r.rho;
  });
  double st = 0.0;
  double sr = 0.0;
  std::vector<double> wt(n), wr(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = fam.weight(out.ells[i]);
    wt[i] = w * out.uni_t[i];
    wr[i] = w * out.uni_r[i];
    st += wt[i];
    sr += wr[i];
    out.uni_t_partial.push_back(st);
    out.uni_r_partial.push_back(sr);
    out.max_uni_t = std::max(out.max_uni_t, out.uni_t[i]);
    out.max_uni_r = std::max(out.max_uni_r, out.uni_r[i]);
  }
  if (fam.modes.empty()) {
    out.fit_t = fit_tail(wt);
    out.fit_r = fit_tail(wr);
  }
  if (n > 0) out.rho_sqrt_ell_at_max = rho_t.back() * std::sqrt(std::abs(static_cast<double>(out.ells.back())));
  return out;
}

BogoliubovMatrix BogoliubovMatrix::operator*(const BogoliubovMatrix& o) const {
  return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22, a21 * o.a11 + a22 * o.a21,
          a21 * o.a12 + a22 * o.a22};
}

BogoliubovMatrix BogoliubovMatrix::inverse() const {
  const cd d = a11 * a22 - a12 * a21;
  return {a22 / d, -a12 / d, -a21 / d, a11 / d};
}

BogoliubovMatrix BogoliubovMatrix::from(const Bogoliubov& b) {
  return {b.A, b.B, std::conj(b.B), std::conj(b.A)};
}

FactorBlocks factor_blocks(cd alpha, cd beta, const RhoValue& r0, const RhoValue& r, double phi) {
  const cd ac = std::conj(alpha);
  const cd bc = std::conj(beta);
  const double a2 = std::norm(alpha);
  const double b2 = std::norm(beta);
  const double sp = std::sin(phi);
  const double cp = std::cos(phi);
  auto t_block = [&](const RhoValue& v) {
    return BogoliubovMatrix::from({I * (beta * ac * v.rho - alpha * bc / v.rho - a2 * v.rho_dot),
                                   I * (ac * bc * (v.rho - 1.0 / v.rho) - ac * ac * v.rho_dot)});
  };
  FactorBlocks fb;
  fb.t_at_t0 = t_block(r0);
  fb.t_at_t = t_block(r);
  fb.r = BogoliubovMatrix::from({cp - I * (a2 + b2) * sp, -I * (ac * ac + bc * bc) * sp});

  const double delta = r.rho_dot / r.rho - r0.rho_dot / r0.rho;
  fb.d_block = BogoliubovMatrix::from({1.0 + I * a2 * delta, I * ac * ac * delta});
  const double q = r.rho / r0.rho - r0.rho / r.rho;
  const double g0 = r0.rho_dot / r0.rho;
  fb.s_block = BogoliubovMatrix::from(
      {I * (beta * ac * r0.rho / r.rho - alpha * bc * r.rho / r0.rho + a2 * g0 * q),
       I * ac * (ac * g0 - bc) * q});
  const double k0 = r0.rho_dot * r0.rho_dot + 1.0 / (r0.rho * r0.rho);
  const double rr = r0.rho * r0.rho;
  fb.r_block = BogoliubovMatrix::from(
      {cp + I * ((alpha * bc + beta * ac) * r0.rho_dot * r0.rho - a2 * k0 - b2 * rr) * sp,
       I * (2.0 * ac * bc * r0.rho_dot * r0.rho - ac * ac * k0 - bc * bc * rr) * sp});
  return fb;
}

FactorBlocks appendix_factors(const ModeFamily& fam, const Representation& rep, int ell,
                              double t0, double t) {
  const EPSolution ep = mode_ep(fam, ell, t0);
  return factor_blocks(rep.alpha(ell), rep.beta(ell), ep(t0), ep(t), ep.phase_integral(t0, t));
}

double composition_error(const FactorBlocks& fb, const Bogoliubov& direct) {
  const BogoliubovMatrix u1 = fb.t_at_t.inverse() * fb.r * fb.t_at_t0;
  const BogoliubovMatrix u2 = fb.d_block * fb.s_block * fb.r_block;
  const double scale = std::max(1.0, std::abs(direct.A));
  double e = 0.0;
  for (const auto& u : {u1, u2}) {
    e = std::max(e, std::abs(u.a11 - direct.A) / scale);
    e = std::max(e, std::abs(u.a12 - direct.B) / scale);
  }
  return e;
}

CoherentVariances field_coherent_variances(const Bogoliubov& b, cd alpha, cd beta) {
  return {std::abs(alpha * b.A + std::conj(alpha) * std::conj(b.B)),
          std::abs(beta * b.A + std::conj(beta) * std::conj(b.B))};
}

double t3_constraint(const std::map<int, cd>& labels) {
  double s = 0.0;
  for (const auto& [l, z] : labels) s += l * std::norm(z);
  return std::abs(s);
}

}  // namespace tdho
