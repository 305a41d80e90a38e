#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cfts/errors.hpp"
#include "cfts/scenario.hpp"

namespace cfts {

namespace {

struct CommonOpts {
  std::string config;
  std::string out;
  double tol = 0.0;
  double deadband = 0.0;
  CLI::Option* out_opt = nullptr;
  CLI::Option* tol_opt = nullptr;
  CLI::Option* deadband_opt = nullptr;
};

void wire_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("config", o.config, "scenario configuration file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  o.out_opt = cmd->add_option("--out-dir", o.out,
                              "artifact directory (overrides config out_dir)");
  o.tol_opt =
      cmd->add_option("--tol", o.tol, "integrator tolerance (overrides config)");
  o.deadband_opt = cmd->add_option(
      "--deadband", o.deadband,
      "zero-projection threshold (overrides config deadband)");
}

ScenarioConfig load_config(const CommonOpts& o) {
  std::ifstream in(o.config);
  if (!in) throw ConfigError("cannot read config file " + o.config);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("config parse: ") + e.what());
  }
  ScenarioConfig cfg = ScenarioConfig::from_json(j);
  if (o.tol_opt->count() > 0) cfg.tol = o.tol;
  if (o.deadband_opt->count() > 0) cfg.zero_deadband = o.deadband;
  return cfg;
}

std::filesystem::path resolve_out(const CommonOpts& o,
                                  const ScenarioConfig& cfg) {
  return o.out_opt->count() > 0 ? std::filesystem::path(o.out)
                                : std::filesystem::path(cfg.out_dir);
}

void print_result(const ScenarioResult& res, bool simulated) {
  const Certificate& cert = res.certificate;
  std::cout.precision(10);
  std::cout << "scenario: " << res.name << '\n'
            << "regime: " << cert.regime << '\n'
            << "valid: " << (cert.valid ? "yes" : "no") << '\n'
            << "gamma_s0: " << cert.gamma_s0 << '\n'
            << "settling_bound: " << cert.settling_bound << '\n'
            << "impulse_count: " << cert.impulse_count << '\n';
  for (const ConditionCheck& c : cert.conditions) {
    std::cout << "condition " << c.name << ": "
              << (c.pass ? "pass" : "FAIL") << " (lhs " << c.lhs << ", rhs "
              << c.rhs << ")\n";
  }
  for (const std::string& note : cert.notes) {
    std::cout << "note: " << note << '\n';
  }
  if (simulated) {
    if (res.empirical_settling.has_value()) {
      std::cout << "empirical_settling: " << *res.empirical_settling << '\n';
    } else {
      std::cout << "empirical_settling: not reached within horizon\n";
    }
    std::cout << "flow_violations: " << res.monitor.flow_violations.size()
              << '\n'
              << "jump_violations: " << res.monitor.jump_violations.size()
              << '\n'
              << "series: " << res.series_path.string() << '\n';
  }
  std::cout << "summary: " << res.summary_path.string() << '\n';
}

}  // namespace

int cli_main(int argc, char** argv) {
  CLI::App app{"finite-time stability toolkit for conformable impulsive "
               "systems"};
  app.require_subcommand(1);

  CommonOpts sim_o;
  CLI::App* sim = app.add_subcommand(
      "simulate", "simulate one scenario, certify it, and monitor the run");
  wire_common(sim, sim_o);

  CommonOpts cert_o;
  CLI::App* cert = app.add_subcommand(
      "certify", "evaluate the certificate without simulating");
  wire_common(cert, cert_o);

  CommonOpts mnn_o;
  CLI::App* mnn = app.add_subcommand(
      "mnn", "run a drive-response network synchronization scenario");
  wire_common(mnn, mnn_o);

  std::vector<std::string> only;
  std::string reproduce_out = "out";
  CLI::App* reproduce = app.add_subcommand(
      "reproduce-paper", "run the built-in reproduction suite");
  reproduce->add_option("--only", only,
                        "restrict to scenarios whose name contains any of "
                        "these substrings");
  reproduce->add_option("--out-dir", reproduce_out, "artifact directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(sim)) {
      const ScenarioConfig cfg = load_config(sim_o);
      const ScenarioResult res =
          run_scenario(cfg, resolve_out(sim_o, cfg), true);
      print_result(res, true);
      return res.exit_code;
    }
    if (app.got_subcommand(cert)) {
      const ScenarioConfig cfg = load_config(cert_o);
      const ScenarioResult res =
          run_scenario(cfg, resolve_out(cert_o, cfg), false);
      print_result(res, false);
      return res.exit_code;
    }
    if (app.got_subcommand(mnn)) {
      const ScenarioConfig cfg = load_config(mnn_o);
      if (cfg.kind != "mnn") {
        throw ConfigError("the mnn subcommand needs a config with kind "
                          "\"mnn\" (got \"" + cfg.kind + "\")");
      }
      const ScenarioResult res =
          run_scenario(cfg, resolve_out(mnn_o, cfg), true);
      print_result(res, true);
      return res.exit_code;
    }
    return reproduce_builtin(only, reproduce_out, std::cout);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return 2;
  } catch (const IntegrationError& e) {
    std::cerr << "simulation failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
}

}  // namespace cfts
