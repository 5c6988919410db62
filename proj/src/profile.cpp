#include "tdho/profile.hpp"

#include <math.h>  // boost 1.74 pchip calls unqualified isnan
#include <boost/math/interpolators/pchip.hpp>

#include <algorithm>
#include <sstream>

#include "tdho/errors.hpp"

namespace tdho {

namespace {

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) throw ContractError(std::string(what) + " must be finite");
}

}  // namespace

FrequencyProfile FrequencyProfile::constant(double kappa0) {
  require_finite(kappa0, "kappa0");
  FrequencyProfile p;
  p.kind_ = ProfileKind::constant;
  p.name_ = "constant";
  p.params_ = {kappa0};
  return p;
}

FrequencyProfile FrequencyProfile::mathieu(double a, double b) {
  require_finite(a, "mathieu a");
  require_finite(b, "mathieu b");
  FrequencyProfile p;
  p.kind_ = ProfileKind::mathieu;
  p.name_ = "mathieu";
  p.params_ = {a, b};
  return p;
}

FrequencyProfile FrequencyProfile::gowdy_t3(double omega) {
  require_finite(omega, "omega");
  FrequencyProfile p;
  p.kind_ = ProfileKind::gowdy_t3;
  p.name_ = "gowdy_t3";
  p.params_ = {omega};
  p.omega2_ = omega * omega;
  p.interval_ = {0.0, std::numeric_limits<double>::infinity()};
  return p;
}

FrequencyProfile FrequencyProfile::gowdy_s(double omega) {
  require_finite(omega, "omega");
  FrequencyProfile p;
  p.kind_ = ProfileKind::gowdy_s;
  p.name_ = "gowdy_s";
  p.params_ = {omega};
  p.omega2_ = omega * omega;
  p.interval_ = {0.0, M_PI};
  return p;
}

FrequencyProfile FrequencyProfile::table(std::vector<double> t, std::vector<double> kappa) {
  if (t.size() != kappa.size()) throw ContractError("table: t and kappa differ in length");
  if (t.size() < 4) throw ContractError("table: at least 4 samples required");
  for (std::size_t i = 0; i < t.size(); ++i) {
    require_finite(t[i], "table t");
    require_finite(kappa[i], "table kappa");
    if (i > 0 && !(t[i] > t[i - 1])) throw ContractError("table: t must be strictly increasing");
  }
  FrequencyProfile p;
  p.kind_ = ProfileKind::table;
  p.name_ = "table";
  p.interval_ = {t.front(), t.back()};
  p.params_ = {};
  p.breakpoints_.assign(t.begin() + 1, t.end() - 1);
  using Interp = boost::math::interpolators::pchip<std::vector<double>>;
  auto interp = std::make_shared<Interp>(std::move(t), std::move(kappa));
  p.fn_ = [interp](double x) { return (*interp)(x); };
  return p;
}

FrequencyProfile FrequencyProfile::custom(std::string name, Interval interval,
                                          std::function<double(double)> kappa) {
  if (!kappa) throw ContractError("custom profile needs a kappa function");
  if (!(interval.lo < interval.hi)) throw ContractError("custom profile: empty interval");
  FrequencyProfile p;
  p.kind_ = ProfileKind::custom;
  p.name_ = std::move(name);
  p.interval_ = interval;
  p.fn_ = std::move(kappa);
  return p;
}

void FrequencyProfile::require_inside(double t, const char* what) const {
  if (!interval_.contains(t)) {
    std::ostringstream os;
    os.precision(17);
    os << what << " = " << t << " outside the open interval (" << interval_.lo << ", "
       << interval_.hi << ") of profile " << name_;
    throw DomainError(os.str());
  }
}

double FrequencyProfile::operator()(double t) const {
  require_inside(t, "t");
  return eval(t);
}

}  // namespace tdho
