#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "json.hpp"

namespace tdho::cli {

struct Globals {
  std::optional<double> tol;  // --tol; overrides the scenario value
  unsigned workers = 1;
  std::filesystem::path out = ".";
  bool sweep_t = false;
};

// Each command writes <out>/<name>.csv and <out>/<name>.json and returns 0, or 5 when an
// invariant check fails.
int run_solve(const nlohmann::json& scenario, const Globals& g);
int run_propagate(const nlohmann::json& scenario, const Globals& g);
int run_transition(const nlohmann::json& scenario, const Globals& g);
int run_semiclassical(const nlohmann::json& scenario, const Globals& g);
int run_models_validate(const nlohmann::json& scenario, const Globals& g);
int run_field_unitarity(const nlohmann::json& scenario, const Globals& g);
int run_field_factorize(const nlohmann::json& scenario, const Globals& g);
int run_field_variances(const nlohmann::json& scenario, const Globals& g);
int run_figures(const nlohmann::json& scenario, const Globals& g);

}  // namespace tdho::cli
