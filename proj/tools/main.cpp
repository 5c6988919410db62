#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <string>

#include "CLI11.hpp"
#include "commands.hpp"
#include "scenario.hpp"
#include "tdho/errors.hpp"

namespace {

using tdho::cli::Globals;
using tdho::cli::json;
using Runner = std::function<int(const json&, const Globals&)>;

unsigned worker_override(unsigned fallback) {
  const char* env = std::getenv("TDHO_WORKERS");
  if (!env || !*env) return fallback;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (*end != '\0' || v < 1) throw tdho::cli::UsageError("TDHO_WORKERS must be a positive integer");
  return static_cast<unsigned>(v);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Time-dependent harmonic oscillators: propagators, transitions and field modes"};
  app.require_subcommand(1);
  // Global flags are accepted after the subcommand names too.
  app.fallthrough();
  Globals g;
  double tol = 0.0;
  unsigned workers = 1;
  std::string out = ".";
  std::string scenario_path;
  app.add_option("--tol", tol, "integration tolerance")->check(CLI::PositiveNumber);
  app.add_option("--workers", workers, "worker threads")->check(CLI::Range(1u, 1024u));
  app.add_option("--out", out, "output directory");
  app.add_option("--scenario", scenario_path, "scenario JSON file");

  Runner runner;
  bool scenario_required = true;
  auto leaf = [&](CLI::App* sub, Runner r, bool required = true) {
    sub->callback([&, r, required] {
      runner = r;
      scenario_required = required;
    });
  };
  leaf(app.add_subcommand("solve", "fundamental pair on a time grid"), tdho::cli::run_solve);
  leaf(app.add_subcommand("propagate", "propagator kernel and packet evolution"), tdho::cli::run_propagate);
  leaf(app.add_subcommand("transition", "transition amplitude table"), tdho::cli::run_transition);
  leaf(app.add_subcommand("semiclassical", "coherent-state trajectories and variances"),
       tdho::cli::run_semiclassical);
  auto* models = app.add_subcommand("models", "model utilities");
  models->require_subcommand(1);
  leaf(models->add_subcommand("validate", "closed forms against the integrator"),
       tdho::cli::run_models_validate, false);
  auto* field = app.add_subcommand("field", "decoupled field modes");
  field->require_subcommand(1);
  leaf(field->add_subcommand("unitarity", "sum of |B_l|^2 and tail fit"), tdho::cli::run_field_unitarity);
  leaf(field->add_subcommand("factorize", "factorization obstructions"), tdho::cli::run_field_factorize);
  auto* var = field->add_subcommand("variances", "coherent-state variances per mode");
  leaf(var, tdho::cli::run_field_variances);
  var->add_flag("--sweep-t", g.sweep_t, "sweep the t_grid of the scenario");
  leaf(app.add_subcommand("figures", "plot data for the three figures"), tdho::cli::run_figures, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (app.count("--tol")) g.tol = tol;
    g.workers = worker_override(workers);
    g.out = out;
    std::filesystem::create_directories(g.out);
    json sc;
    if (!scenario_path.empty())
      sc = tdho::cli::load_scenario(scenario_path);
    else if (scenario_required)
      throw tdho::cli::UsageError("--scenario is required for this command");
    return runner(sc, g);
  } catch (const tdho::cli::UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const tdho::ContractError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const tdho::DomainError& e) {
    std::fprintf(stderr, "domain error: %s\n", e.what());
    return 2;
  } catch (const tdho::SingularityError& e) {
    std::fprintf(stderr, "singularity: %s (last time reached %.17g)\n", e.what(), e.last_time());
    return 4;
  } catch (const tdho::CausticError& e) {
    std::fprintf(stderr, "caustic: %s\n", e.what());
    return 3;
  } catch (const tdho::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  } catch (const nlohmann::json::exception& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::fprintf(stderr, "i/o error: %s\n", e.what());
    return 2;
  }
}
