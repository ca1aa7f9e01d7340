// Experiment runner.
//
//   dpdo_run run <config>        run and write <name>.csv and <name>.summary
//   dpdo_run validate <config>   parse and validate only
//   dpdo_run schema <mode>       print the CSV columns of a mode
//
// Exit status: 0 all gates pass, 1 some gate failed, 2 invalid config,
// 3 numerical failure.

#include <iostream>

#include <CLI11.hpp>

#include "dpdo/experiment.hpp"

namespace {

enum Exit { kOk = 0, kGateFailed = 1, kBadConfig = 2, kNumerical = 3 };

int run(const std::string& path, bool validate_only) {
  dpdo::ExperimentConfig cfg;
  try {
    cfg = dpdo::make_experiment_config(dpdo::Config::load(path));
  } catch (const dpdo::InvalidConfiguration& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kBadConfig;
  } catch (const dpdo::InvalidInput& e) {
    std::cerr << "invalid config: " << path << ": " << e.what() << "\n";
    return kBadConfig;
  }
  if (validate_only) {
    std::cout << path << ": ok (mode " << dpdo::mode_name(cfg.mode) << ")\n";
    return kOk;
  }
  try {
    const dpdo::ExperimentReport report = dpdo::run_experiment(cfg);
    const dpdo::OutputPaths paths = dpdo::write_report(cfg, report);
    for (const auto& gate : report.gates) {
      std::cout << gate.id << " " << (gate.pass ? "PASS" : "FAIL") << "  " << gate.detail << "\n";
    }
    std::cout << "wrote " << paths.csv << " and " << paths.summary << "\n";
    return report.all_pass() ? kOk : kGateFailed;
  } catch (const dpdo::NearSingular& e) {
    std::cerr << "system: not uniquely solvable: " << e.what() << "\n";
  } catch (const dpdo::AssemblyError& e) {
    std::cerr << "system: " << e.what() << "\n";
  } catch (const dpdo::EstimationError& e) {
    std::cerr << "comparison: " << e.what() << "\n";
  } catch (const dpdo::InvalidConfiguration& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return kBadConfig;
  } catch (const dpdo::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
  }
  return kNumerical;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadrant boundary value problems for digital pseudo-differential operators"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run an experiment and write its reports");
  run_cmd->add_option("config", config_path, "Config file")->required();

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Validate a config without computing");
  validate_cmd->add_option("config", validate_path, "Config file")->required();

  std::string mode;
  auto* schema_cmd = app.add_subcommand("schema", "Print the CSV schema of a mode");
  schema_cmd->add_option("mode", mode, "Mode name")->required()->check(CLI::IsMember(dpdo::mode_names()));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kBadConfig;
  }

  if (*run_cmd) return run(config_path, false);
  if (*validate_cmd) return run(validate_path, true);
  std::cout << dpdo::schema_text(dpdo::parse_mode(mode));
  return kOk;
}
