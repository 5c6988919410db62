#include "scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "tdho/errors.hpp"

namespace tdho::cli {

ObjectReader::ObjectReader(const json& j, std::string where) : j_(j), where_(std::move(where)) {
  if (!j_.is_object()) throw UsageError(where_ + ": expected a JSON object");
}

bool ObjectReader::has(const std::string& key) const { return j_.contains(key); }

const json& ObjectReader::at(const std::string& key) {
  if (!j_.contains(key)) throw UsageError(where_ + ": missing key '" + key + "'");
  used_.insert(key);
  return j_.at(key);
}

const json& ObjectReader::raw(const std::string& key) { return at(key); }

double ObjectReader::number(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number()) throw UsageError(where_ + "." + key + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw UsageError(where_ + "." + key + ": must be finite");
  return x;
}

double ObjectReader::number(const std::string& key, double fallback) {
  return has(key) ? number(key) : fallback;
}

int ObjectReader::integer(const std::string& key) {
  const json& v = at(key);
  if (!v.is_number_integer()) throw UsageError(where_ + "." + key + ": expected an integer");
  return v.get<int>();
}

int ObjectReader::integer(const std::string& key, int fallback) {
  return has(key) ? integer(key) : fallback;
}

bool ObjectReader::boolean(const std::string& key, bool fallback) {
  if (!has(key)) return fallback;
  const json& v = at(key);
  if (!v.is_boolean()) throw UsageError(where_ + "." + key + ": expected true or false");
  return v.get<bool>();
}

std::string ObjectReader::string(const std::string& key) {
  const json& v = at(key);
  if (!v.is_string()) throw UsageError(where_ + "." + key + ": expected a string");
  return v.get<std::string>();
}

std::string ObjectReader::string(const std::string& key, const std::string& fallback) {
  return has(key) ? string(key) : fallback;
}

std::complex<double> ObjectReader::complex(const std::string& key) {
  const json& v = at(key);
  if (v.is_number()) return {v.get<double>(), 0.0};
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw UsageError(where_ + "." + key + ": expected a number or [re, im]");
}

std::vector<double> ObjectReader::numbers(const std::string& key) {
  const json& v = at(key);
  if (!v.is_array()) throw UsageError(where_ + "." + key + ": expected an array of numbers");
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw UsageError(where_ + "." + key + ": expected an array of numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> ObjectReader::integers(const std::string& key) {
  const json& v = at(key);
  if (!v.is_array()) throw UsageError(where_ + "." + key + ": expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer())
      throw UsageError(where_ + "." + key + ": expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

ObjectReader ObjectReader::object(const std::string& key) {
  return ObjectReader(at(key), where_ + "." + key);
}

void ObjectReader::done() const {
  std::string unknown;
  for (auto it = j_.begin(); it != j_.end(); ++it) {
    if (!used_.count(it.key())) unknown += (unknown.empty() ? "" : ", ") + it.key();
  }
  if (!unknown.empty()) throw UsageError(where_ + ": unknown key(s): " + unknown);
}

void ProfileSpec::require_time(double t) const {
  if (restrict_to && !restrict_to->contains(t))
    throw DomainError("time " + std::to_string(t) + " lies outside the scenario interval");
  profile.require_inside(t, "time");
}

void ProfileSpec::require_times(std::initializer_list<double> ts) const {
  for (double t : ts) require_time(t);
}

namespace {

std::vector<std::vector<double>> read_csv_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read profile table '" + path + "'");
  std::vector<std::vector<double>> cols(2);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string a, b;
    if (!std::getline(ls, a, ',') || !std::getline(ls, b, ',')) continue;
    try {
      cols[0].push_back(std::stod(a));
      cols[1].push_back(std::stod(b));
    } catch (const std::exception&) {
      if (!cols[0].empty()) throw UsageError("malformed row in profile table '" + path + "'");
    }
  }
  return cols;
}

}  // namespace

ProfileSpec read_profile(ObjectReader r) {
  const std::string kind = r.string("kind");
  std::optional<ModelSpec> model;
  std::optional<FrequencyProfile> prof;
  if (kind == "constant") {
    model = ModelSpec{ModelKind::constant, r.number("kappa0"), 0.0};
  } else if (kind == "free") {
    model = ModelSpec{ModelKind::free, 0.0, 0.0};
  } else if (kind == "tachyonic" || kind == "gowdy_t3" || kind == "gowdy_s") {
    model = ModelSpec{parse_model_kind(kind), r.number("omega"), 0.0};
  } else if (kind == "mathieu") {
    model = ModelSpec{ModelKind::mathieu, r.number("a"), r.number("b")};
  } else if (kind == "table") {
    std::vector<double> t, k;
    if (r.has("csv")) {
      auto cols = read_csv_table(r.string("csv"));
      t = std::move(cols[0]);
      k = std::move(cols[1]);
    } else {
      t = r.numbers("t");
      k = r.numbers("kappa");
    }
    prof = FrequencyProfile::table(std::move(t), std::move(k));
  } else {
    throw UsageError(r.where() + ".kind: unknown profile kind '" + kind + "'");
  }
  ProfileSpec spec{model ? model->profile() : *prof, model, std::nullopt};
  if (r.has("interval")) {
    const auto iv = r.numbers("interval");
    if (iv.size() != 2 || !(iv[0] < iv[1]))
      throw UsageError(r.where() + ".interval: expected [lo, hi] with lo < hi");
    spec.restrict_to = Interval{iv[0], iv[1]};
  }
  r.done();
  return spec;
}

std::vector<double> read_grid(ObjectReader& parent, const std::string& key) {
  const json& v = parent.raw(key);
  if (v.is_array()) {
    std::vector<double> out;
    for (const auto& x : v) {
      if (!x.is_number()) throw UsageError(parent.where() + "." + key + ": expected numbers");
      out.push_back(x.get<double>());
    }
    if (out.empty()) throw UsageError(parent.where() + "." + key + ": empty grid");
    return out;
  }
  ObjectReader g(v, parent.where() + "." + key);
  const double a = g.number("start");
  const double b = g.number("stop");
  const int n = g.integer("count");
  const std::string spacing = g.string("spacing", "linear");
  g.done();
  if (n < 1) throw UsageError(g.where() + ".count: must be positive");
  std::vector<double> out(n);
  if (spacing == "linear") {
    for (int i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * i / (n - 1);
  } else if (spacing == "log") {
    if (!(a > 0.0 && b > 0.0)) throw UsageError(g.where() + ": log spacing needs positive ends");
    for (int i = 0; i < n; ++i)
      out[i] = n == 1 ? a : a * std::pow(b / a, static_cast<double>(i) / (n - 1));
  } else {
    throw UsageError(g.where() + ".spacing: expected linear or log");
  }
  return out;
}

EPQuadraticForm read_form(ObjectReader r, double* scale) {
  const double a11 = r.number("a11");
  const double a12 = r.number("a12", 0.0);
  const double a22 = r.number("a22");
  r.done();
  return EPQuadraticForm::normalized(a11, a12, a22, scale);
}

Representation read_representation(ObjectReader r) {
  const std::string kind = r.string("kind", "standard");
  if (kind != "standard") throw UsageError(r.where() + ".kind: only 'standard' is supported");
  Representation rep;
  if (r.has("phase")) {
    const std::vector<double> c = r.numbers("phase");
    rep.phase = [c](int l) {
      double v = 0.0;
      for (std::size_t k = c.size(); k-- > 0;) v = v * l + c[k];
      return v;
    };
  }
  r.done();
  return rep;
}

PairSource read_source(const std::string& s) {
  if (s == "ode") return PairSource::ode;
  if (s == "closed_form") return PairSource::closed_form;
  throw UsageError("source: expected 'ode' or 'closed_form'");
}

json load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot read scenario '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw UsageError("scenario '" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace tdho::cli
