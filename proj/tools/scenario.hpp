#pragma once

#include <complex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "tdho/ermakov_pinney.hpp"
#include "tdho/field_theory.hpp"
#include "tdho/models.hpp"
#include "tdho/profile.hpp"

namespace tdho::cli {

using json = nlohmann::json;

// Malformed scenario or command line.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Reads one JSON object and rejects keys that were never asked for.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string where);

  bool has(const std::string& key) const;
  const json& raw(const std::string& key);
  double number(const std::string& key);
  double number(const std::string& key, double fallback);
  int integer(const std::string& key);
  int integer(const std::string& key, int fallback);
  bool boolean(const std::string& key, bool fallback);
  std::string string(const std::string& key);
  std::string string(const std::string& key, const std::string& fallback);
  std::complex<double> complex(const std::string& key);
  std::vector<double> numbers(const std::string& key);
  std::vector<int> integers(const std::string& key);
  ObjectReader object(const std::string& key);
  // Throws UsageError listing unknown keys.
  void done() const;
  const std::string& where() const { return where_; }

 private:
  const json& at(const std::string& key);
  const json& j_;
  std::string where_;
  std::set<std::string> used_;
};

// Profile with the model it came from, when it has one.
struct ProfileSpec {
  FrequencyProfile profile;
  std::optional<ModelSpec> model;
  std::optional<Interval> restrict_to;
  void require_times(std::initializer_list<double> ts) const;
  void require_time(double t) const;
};

// {"kind": constant|free|tachyonic|mathieu|gowdy_t3|gowdy_s|table, ..., "interval": [lo, hi]}
ProfileSpec read_profile(ObjectReader r);
// Explicit array, or {"start", "stop", "count", "spacing": linear|log}.
std::vector<double> read_grid(ObjectReader& parent, const std::string& key);
// {"a11", "a12", "a22"}; normalized to unit determinant, scale reported through *scale.
EPQuadraticForm read_form(ObjectReader r, double* scale);
// {"kind": "standard", "phase": [c0, c1, ...]} with gamma_l = sum c_k l^k.
Representation read_representation(ObjectReader r);
PairSource read_source(const std::string& s);

json load_scenario(const std::string& path);

}  // namespace tdho::cli
