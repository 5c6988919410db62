#include "tdho/classical.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

// Dormand-Prince 8(5,3) tableau.
constexpr int n_stages = 12;
constexpr double rk_c[12] = {0.0, 0.05260015195876773, 0.0789002279381516, 0.1183503419072274, 0.2816496580927726, 0.3333333333333333, 0.25, 0.3076923076923077, 0.6512820512820513, 0.6, 0.8571428571428571, 1.0};
constexpr double rk_a[12][12] = {
    {0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.05260015195876773, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.0197250569845379, 0.0591751709536137, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.02958758547680685, 0.0, 0.08876275643042054, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.2413651341592667, 0.0, -0.8845494793282861, 0.924834003261792, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037037037037037035, 0.0, 0.0, 0.17082860872947386, 0.12546768756682242, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.037109375, 0.0, 0.0, 0.17025221101954405, 0.06021653898045596, -0.017578125, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.03709200011850479, 0.0, 0.0, 0.17038392571223998, 0.10726203044637328, -0.015319437748624402, 0.008273789163814023, 0.0, 0.0, 0.0, 0.0, 0.0},
    {0.6241109587160757, 0.0, 0.0, -3.3608926294469414, -0.868219346841726, 27.59209969944671, 20.154067550477894, -43.48988418106996, 0.0, 0.0, 0.0, 0.0},
    {0.47766253643826434, 0.0, 0.0, -2.4881146199716677, -0.590290826836843, 21.230051448181193, 15.279233632882423, -33.28821096898486, -0.020331201708508627, 0.0, 0.0, 0.0},
    {-0.9371424300859873, 0.0, 0.0, 5.186372428844064, 1.0914373489967295, -8.149787010746927, -18.52006565999696, 22.739487099350505, 2.4936055526796523, -3.0467644718982196, 0.0, 0.0},
    {2.273310147516538, 0.0, 0.0, -10.53449546673725, -2.0008720582248625, -17.9589318631188, 27.94888452941996, -2.8589982771350235, -8.87285693353063, 12.360567175794303, 0.6433927460157636, 0.0},
};
constexpr double rk_b[12] = {0.054293734116568765, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, 0.3111643669578199, -0.1521609496625161, 0.20136540080403034, 0.04471061572777259};
constexpr double rk_e3[13] = {-0.18980075407240762, 0.0, 0.0, 0.0, 0.0, 4.450312892752409, 1.8915178993145003, -5.801203960010585, -0.4226823213237919, -0.1521609496625161, 0.20136540080403034, 0.02265179219836082, 0.0};
constexpr double rk_e5[13] = {0.01312004499419488, 0.0, 0.0, 0.0, 0.0, -1.2251564463762044, -0.4957589496572502, 1.6643771824549864, -0.35032884874997366, 0.3341791187130175, 0.08192320648511571, -0.022355307863886294, 0.0};

constexpr double safety = 0.9;
constexpr double min_factor = 0.2;
constexpr double max_factor = 10.0;
constexpr double max_phase_step = 1.5;

double wrap_pi(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  while (a > std::numbers::pi) a -= two_pi;
  while (a <= -std::numbers::pi) a += two_pi;
  return a;
}

std::string fmt_time(double t) {
  std::ostringstream os;
  os.precision(17);
  os << t;
  return os.str();
}

}  // namespace

FundamentalIntegrator::FundamentalIntegrator(const FrequencyProfile& profile, double t0, double tol)
    : profile_(profile), t0_(t0), t_(t0), tol_(tol), y_{1.0, 0.0, 0.0, 1.0} {
  profile_.require_inside(t0, "t0");
  if (!(tol > 0.0) || tol > 1e-2) throw ContractError("integrator tolerance must be in (0, 1e-2]");
  theta_c_ = angle(1.0, 0.0, omega_ref(t0));
}

FundamentalIntegrator::FundamentalIntegrator(const FrequencyProfile& profile,
                                             const FundamentalPair& start, double tol)
    : FundamentalIntegrator(profile, start.t0, tol) {
  profile_.require_inside(start.t, "t");
  t_ = start.t;
  y_ = {start.c, start.c_dot, start.s, start.s_dot};
  const double w = omega_ref(t_);
  theta_s_ = angle(y_[2], y_[3], w);
  theta_c_ = angle(y_[0], y_[1], w);
}

double FundamentalIntegrator::omega_ref(double t) const {
  return std::max(std::sqrt(std::abs(profile_.eval(t))), 1.0);
}

double FundamentalIntegrator::angle(double u, double v, double w) const {
  return std::atan2(w * u, v);
}

PairIndex FundamentalIntegrator::index() const {
  constexpr double pi = std::numbers::pi;
  PairIndex idx;
  if (t_ >= t0_) {
    idx.zeros_s = static_cast<int>(std::floor(theta_s_ / pi));
    idx.zeros_c = static_cast<int>(std::floor(theta_c_ / pi));
  } else {
    idx.zeros_s = static_cast<int>(std::floor(-theta_s_ / pi));
    idx.zeros_c = static_cast<int>(std::floor((pi - theta_c_) / pi));
  }
  idx.zeros_s = std::max(idx.zeros_s, 0);
  idx.zeros_c = std::max(idx.zeros_c, 0);
  return idx;
}

bool FundamentalIntegrator::attempt(double h, std::array<double, 4>& y_new, double& err) {
  std::array<std::array<double, 4>, 13> k;
  auto rhs = [this](double t, const std::array<double, 4>& y) {
    const double kap = profile_.eval(t);
    return std::array<double, 4>{y[1], -kap * y[0], y[3], -kap * y[2]};
  };
  k[0] = f_;
  for (int s = 1; s < n_stages; ++s) {
    std::array<double, 4> yy = y_;
    for (int j = 0; j < s; ++j) {
      const double a = rk_a[s][j];
      if (a == 0.0) continue;
      for (int i = 0; i < 4; ++i) yy[i] += h * a * k[j][i];
    }
    k[s] = rhs(t_ + rk_c[s] * h, yy);
  }
  y_new = y_;
  for (int j = 0; j < n_stages; ++j) {
    const double b = rk_b[j];
    if (b == 0.0) continue;
    for (int i = 0; i < 4; ++i) y_new[i] += h * b * k[j][i];
  }
  for (const auto& v : y_new)
    if (!std::isfinite(v)) {
      err = std::numeric_limits<double>::infinity();
      return false;
    }
  k[12] = rhs(t_ + h, y_new);

  // Error scale uses the phase-space amplitude of each column so that components
  // passing through zero do not force tiny steps.
  const double w = std::max(omega_ref(t_), omega_ref(t_ + h));
  std::array<double, 4> scale;
  for (int col = 0; col < 2; ++col) {
    const int iu = 2 * col;
    const int iv = 2 * col + 1;
    const double amp = std::max({std::abs(y_[iu]), std::abs(y_new[iu]), std::abs(y_[iv]) / w,
                                 std::abs(y_new[iv]) / w});
    scale[iu] = tol_ * amp + 1e-300;
    scale[iv] = tol_ * amp * w + 1e-300;
  }
  double e5 = 0.0;
  double e3 = 0.0;
  for (int i = 0; i < 4; ++i) {
    double s5 = 0.0;
    double s3 = 0.0;
    for (int j = 0; j < 13; ++j) {
      s5 += rk_e5[j] * k[j][i];
      s3 += rk_e3[j] * k[j][i];
    }
    s5 /= scale[i];
    s3 /= scale[i];
    e5 += s5 * s5;
    e3 += s3 * s3;
  }
  if (e5 == 0.0 && e3 == 0.0) {
    err = 0.0;
  } else {
    err = std::abs(h) * e5 / std::sqrt((e5 + 0.01 * e3) * 4.0);
  }
  f_ = k[12];
  return true;
}

void FundamentalIntegrator::advance_to(double t) {
  if (t == t_) return;
  profile_.require_inside(t, "t");
  const double dir = t > t_ ? 1.0 : -1.0;
  {
    const double kap = profile_.eval(t_);
    f_ = {y_[1], -kap * y_[0], y_[3], -kap * y_[2]};
  }
  if (dir != dir_ || h_ == 0.0) {
    h_ = 0.05 / omega_ref(t_);
    dir_ = dir;
  }
  constexpr std::size_t max_steps = 200000000;
  while ((t - t_) * dir > 0.0) {
    const double w = omega_ref(t_);
    double h_abs = std::min(h_, max_phase_step / w);
    const double min_step = 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t_));
    bool rejected = false;
    while (true) {
      if (h_abs < min_step) {
        throw SingularityError("step size underflow while integrating towards t = " + fmt_time(t) +
                                   "; last reached t = " + fmt_time(t_),
                               t_);
      }
      double h = dir * h_abs;
      bool last = false;
      if ((t_ + h - t) * dir >= 0.0) {
        h = t - t_;
        last = true;
      }
      // land exactly on the next knot so each step sees one smooth piece
      const auto& bps = profile_.breakpoints();
      double knot = 0.0;
      bool at_knot = false;
      if (!bps.empty()) {
        if (dir > 0.0) {
          auto it = std::upper_bound(bps.begin(), bps.end(), t_);
          if (it != bps.end() && *it < t_ + h) knot = *it, at_knot = true;
        } else {
          auto it = std::lower_bound(bps.begin(), bps.end(), t_);
          if (it != bps.begin() && *(it - 1) > t_ + h) knot = *(it - 1), at_knot = true;
        }
        if (at_knot) {
          h = knot - t_;
          last = false;
        }
      }
      std::array<double, 4> y_new;
      double err;
      const std::array<double, 4> f_saved = f_;
      const bool finite = attempt(h, y_new, err);
      if (finite && err < 1.0) {
        double factor = err == 0.0 ? max_factor : std::min(max_factor, safety * std::pow(err, -0.125));
        if (rejected) factor = std::min(1.0, factor);
        const double t_new = last ? t : at_knot ? knot : t_ + h;
        const double w_new = omega_ref(t_new);
        const double w_old = omega_ref(t_);
        theta_s_ += wrap_pi(angle(y_new[2], y_new[3], w_new) - angle(y_[2], y_[3], w_old));
        theta_c_ += wrap_pi(angle(y_new[0], y_new[1], w_new) - angle(y_[0], y_[1], w_old));
        t_ = t_new;
        y_ = y_new;
        if ((!last && !at_knot) || std::abs(h) >= h_abs * 0.5) h_ = h_abs * factor;
        ++steps_;
        if (steps_ > max_steps) throw NumericError("integrator exceeded the step budget");
        break;
      }
      f_ = f_saved;
      const double factor = finite ? std::max(min_factor, safety * std::pow(err, -0.125)) : min_factor;
      h_abs *= factor;
      rejected = true;
    }
  }
}

FundamentalPair solve_fundamental(const FrequencyProfile& profile, double t0, double t, double tol) {
  return solve_indexed(profile, t0, t, tol).pair;
}

IndexedPair solve_indexed(const FrequencyProfile& profile, double t0, double t, double tol) {
  profile.require_inside(t0, "t0");
  profile.require_inside(t, "t");
  if (profile.is_constant()) return closed_form_constant_indexed(profile.params()[0], t0, t);
  FundamentalIntegrator integ(profile, t0, tol);
  integ.advance_to(t);
  return integ.indexed();
}

std::vector<IndexedPair> solve_fundamental_grid(const FrequencyProfile& profile, double t0,
                                                std::span<const double> times, double tol) {
  profile.require_inside(t0, "t0");
  for (double t : times) profile.require_inside(t, "t");
  std::vector<IndexedPair> out(times.size());
  if (profile.is_constant()) {
    for (std::size_t i = 0; i < times.size(); ++i)
      out[i] = closed_form_constant_indexed(profile.params()[0], t0, times[i]);
    return out;
  }
  std::vector<std::size_t> fwd;
  std::vector<std::size_t> bwd;
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] >= t0)
      fwd.push_back(i);
    else
      bwd.push_back(i);
  }
  std::stable_sort(fwd.begin(), fwd.end(), [&](auto a, auto b) { return times[a] < times[b]; });
  std::stable_sort(bwd.begin(), bwd.end(), [&](auto a, auto b) { return times[a] > times[b]; });
  for (const auto* order : {&fwd, &bwd}) {
    FundamentalIntegrator integ(profile, t0, tol);
    for (std::size_t i : *order) {
      integ.advance_to(times[i]);
      out[i] = integ.indexed();
    }
  }
  return out;
}

FundamentalPair closed_form_constant(double kappa0, double t0, double t) {
  const double d = t - t0;
  FundamentalPair p{t0, t, 1.0, 0.0, d, 1.0};
  if (kappa0 > 0.0) {
    const double w = std::sqrt(kappa0);
    const double cs = std::cos(w * d);
    const double sn = std::sin(w * d);
    p.c = cs;
    p.s = sn / w;
    p.c_dot = -w * sn;
    p.s_dot = cs;
  } else if (kappa0 < 0.0) {
    const double w = std::sqrt(-kappa0);
    const double ch = std::cosh(w * d);
    const double sh = std::sinh(w * d);
    p.c = ch;
    p.s = sh / w;
    p.c_dot = w * sh;
    p.s_dot = ch;
  }
  if (!std::isfinite(p.c) || !std::isfinite(p.s) || !std::isfinite(p.c_dot))
    throw NumericError("closed-form pair overflows for kappa0 = " + fmt_time(kappa0) +
                       ", t - t0 = " + fmt_time(d));
  return p;
}

IndexedPair closed_form_constant_indexed(double kappa0, double t0, double t) {
  IndexedPair out{closed_form_constant(kappa0, t0, t), {}};
  if (kappa0 > 0.0) {
    constexpr double pi = std::numbers::pi;
    const double phase = std::sqrt(kappa0) * std::abs(t - t0);
    out.index.zeros_s = static_cast<int>(std::floor(phase / pi));
    out.index.zeros_c = static_cast<int>(std::floor(phase / pi + 0.5));
  }
  return out;
}

FundamentalPair compose_pair(const FundamentalPair& p21, const FundamentalPair& p10) {
  const double scale = std::max({1.0, std::abs(p21.t0), std::abs(p10.t)});
  if (std::abs(p21.t0 - p10.t) > 1e-12 * scale)
    throw ContractError("compose_pair: intermediate times do not match");
  FundamentalPair p;
  p.t0 = p10.t0;
  p.t = p21.t;
  p.c = p21.c * p10.c + p21.s * p10.c_dot;
  p.s = p21.c * p10.s + p21.s * p10.s_dot;
  p.c_dot = p21.c_dot * p10.c + p21.s_dot * p10.c_dot;
  p.s_dot = p21.c_dot * p10.s + p21.s_dot * p10.s_dot;
  return p;
}

namespace {

int sgn(double v) { return (v > 0.0) - (v < 0.0); }

template <class Locate>
ZeroCount count_zeros(const std::vector<std::pair<double, double>>& samples, double t0,
                      Locate&& locate) {
  // samples ordered along the path from t0; the first entry may sit at t0 itself.
  ZeroCount zc;
  int prev_sign = 0;
  double prev_t = t0;
  double prev_v = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto [ti, vi] = samples[i];
    const int si = sgn(vi);
    const bool at_start = ti == t0;
    if (si == 0) {
      if (!at_start) {
        ++zc.count;
        zc.zeros.push_back(ti);
        // tangential if the neighbours share a sign
        if (prev_sign != 0 && i + 1 < samples.size() && sgn(samples[i + 1].second) == prev_sign)
          ++zc.tangential;
      }
      prev_t = ti;
      prev_v = vi;
      continue;
    }
    if (prev_sign != 0 && si != prev_sign && prev_v != 0.0) {
      ++zc.count;
      zc.zeros.push_back(locate(prev_t, prev_v, ti, vi));
    }
    prev_sign = si;
    prev_t = ti;
    prev_v = vi;
  }
  return zc;
}

}  // namespace

ZeroCount index_of(std::span<const double> times, std::span<const double> values, double t0,
                   double t) {
  if (times.size() != values.size()) throw ContractError("index_of: size mismatch");
  const double dir = t >= t0 ? 1.0 : -1.0;
  std::vector<std::pair<double, double>> samples;
  for (std::size_t i = 0; i < times.size(); ++i) {
    const double x = (times[i] - t0) * dir;
    if (x >= 0.0 && (t - times[i]) * dir >= 0.0) samples.emplace_back(times[i], values[i]);
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [dir](const auto& a, const auto& b) { return a.first * dir < b.first * dir; });
  return count_zeros(samples, t0, [](double ta, double va, double tb, double vb) {
    return ta + (tb - ta) * va / (va - vb);
  });
}

ZeroCount index_of(const std::function<double(double)>& u, double t0, double t,
                   std::size_t samples, double xtol) {
  if (samples < 2) throw ContractError("index_of: need at least 2 samples");
  std::vector<std::pair<double, double>> pts;
  pts.reserve(samples + 1);
  for (std::size_t i = 0; i <= samples; ++i) {
    const double ti = i == samples ? t : t0 + (t - t0) * static_cast<double>(i) / samples;
    pts.emplace_back(ti, u(ti));
  }
  return count_zeros(pts, t0, [&](double ta, double va, double tb, double vb) {
    (void)vb;
    while (std::abs(tb - ta) > xtol) {
      const double tm = 0.5 * (ta + tb);
      const double vm = u(tm);
      if (vm == 0.0) return tm;
      if (sgn(vm) == sgn(va)) {
        ta = tm;
        va = vm;
      } else {
        tb = tm;
      }
    }
    return 0.5 * (ta + tb);
  });
}

std::complex<double> branch_power(double u, int m, double eps) {
  if (u == 0.0 && eps < 0.0) throw CausticError("branch_power: zero base with negative exponent");
  return std::polar(std::pow(std::abs(u), eps), eps * std::numbers::pi * m);
}

}  // namespace tdho
