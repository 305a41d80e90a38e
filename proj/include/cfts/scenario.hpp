#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cfts/certificates.hpp"
#include "cfts/mnn.hpp"
#include "cfts/monitor.hpp"

namespace cfts {

// One term of a custom polynomial field: F_out += coeff * sgn-preserving
// |S_in|^power. Powers must be positive so the origin stays fixed.
struct PolyTerm {
  int out = 0;
  int in = 0;
  double coeff = 0.0;
  double power = 1.0;
};

struct ImpulseConfig {
  std::vector<double> times;
  std::vector<double> delays;  // broadcast from a single value when needed
  std::vector<double> gains;
  double max_delay = 0.0;
};

// Serializable activation descriptor; fn = scale * <type>(x) with type
// "tanh" or "sin", both with Lipschitz constant and bound |scale|.
struct ActivationSpec {
  std::string type;
  double scale = 1.0;
};

struct MnnConfig {
  MemristiveNetwork network;
  ControllerGains gains;
  State x0;
  State y0;
  std::vector<ActivationSpec> activations;  // source of network.activation
};

// Scenario description, JSON round-trippable. Kinds:
//   "scalar-example"     built-in scalar power-law flow dS = -coeff |S|^power
//   "custom-polynomial"  per-component signed power terms
//   "mnn"                drive/response synchronization pair
struct ScenarioConfig {
  std::string name;
  std::string kind;
  double order = 1.0;
  double t0 = 0.0;
  double horizon = 1.0;
  double tol = 1e-8;
  double zero_deadband = 1e-10;
  double settling_eps = 1e-6;

  // scalar-example / custom-polynomial
  State initial_state;
  double scalar_coeff = 1.0 / 3.0;
  double scalar_power = 0.5;
  std::vector<PolyTerm> poly_terms;
  double lyapunov_c = 0.0;
  double lyapunov_eta = 0.0;

  std::optional<MnnConfig> mnn;

  ImpulseConfig impulses;

  std::string regime;   // certificate regime, see cfts::regime
  double gamma = 0.0;   // chain ratio for impulsive regimes

  int series_points = 2000;
  std::string out_dir = "out";  // default artifact root, CLI --out-dir wins

  static ScenarioConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  void validate() const;  // throws ConfigError
};

struct ScenarioResult {
  std::string name;
  Certificate certificate;
  MonitorReport monitor;
  std::optional<double> empirical_settling;
  int exit_code = 0;  // 0 pass, 1 check failure
  nlohmann::json summary;
  std::filesystem::path series_path;
  std::filesystem::path summary_path;
};

// Runs the full pipeline for one scenario: simulate, certify, monitor,
// write the time series (series.csv) and summary (summary.json) under
// out_dir/<name>/. simulate_system=false skips the simulation (certificate
// only). Throws ConfigError / IntegrationError for exit codes 2 / 3.
ScenarioResult run_scenario(const ScenarioConfig& config,
                            const std::filesystem::path& out_dir,
                            bool simulate_system = true);

// The built-in reproduction set: five scalar power-law scenarios and five
// network synchronization scenarios.
std::vector<ScenarioConfig> builtin_scenarios();

// Runs the built-in set (optionally filtered by name), prints a comparison
// table of certified values against their published references, and returns
// the process exit code.
int reproduce_builtin(const std::vector<std::string>& only,
                      const std::filesystem::path& out_dir, std::ostream& log);

// CLI entry point (subcommands simulate / certify / mnn / reproduce-paper).
int cli_main(int argc, char** argv);

}  // namespace cfts
