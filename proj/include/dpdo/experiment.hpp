#pragma once

// Config-driven experiments. A run produces CSV rows (every row carries h and
// N), gate verdicts tagged with their acceptance id, and timings.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dpdo/comparison.hpp"
#include "dpdo/config.hpp"
#include "dpdo/system.hpp"

namespace dpdo {

enum class Mode { Solve, Roundtrip, ZetaGap, KernelGap, Commutator, FiniteSection };

Mode parse_mode(const std::string& name);
std::string mode_name(Mode mode);
std::vector<std::string> mode_names();

struct ExperimentConfig {
  Config source;
  Mode mode = Mode::Roundtrip;
  std::uint64_t seed = 1;

  // Discrete problem (solve, roundtrip).
  std::string family;
  FamilyParams params;
  double s = 0.0;
  int n = 0;
  double delta = 0.0;
  std::vector<std::string> b_symbols;
  std::vector<std::string> g_symbols;
  int trace_count = 5;
  std::string data_kind = "manufactured";
  std::vector<double> b_values;
  std::vector<double> g_values;

  // Continuous problem (lemma2, theorem3, theorem4). In solve and roundtrip a
  // built-in continuous family is periodized at every h.
  std::optional<ContinuousProblem> continuous;

  std::vector<double> hs;
  /// Nodes per axis at hs.front(); scaled by hs.front() / h for later h.
  int nodes = 0;
  SweepOptions sweep;
  int k_max = 4;
  int samples = 10000;
  int block_j = 0;
  int block_k = 0;

  std::string output_dir = ".";
  std::string name;

  /// Discrete problem at mesh h with empty boundary data.
  ProblemSpec problem_at(double h) const;
  int nodes_at(double h) const;
};

/// Validates mode-specific fields and hypotheses; throws InvalidConfiguration.
ExperimentConfig make_experiment_config(const Config& cfg);

struct GateVerdict {
  std::string id;
  bool pass = false;
  std::string detail;
};

struct ExperimentReport {
  std::string schema;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
  std::vector<GateVerdict> gates;
  std::vector<std::pair<std::string, std::string>> summary;
  std::vector<std::pair<std::string, double>> timings;

  bool all_pass() const;
};

ExperimentReport run_experiment(const ExperimentConfig& cfg);

/// Column list with a one-line description each, as printed by `schema`.
std::string schema_text(Mode mode);

struct OutputPaths {
  std::string csv;
  std::string summary;
};

/// Writes <dir>/<name>.csv and <dir>/<name>.summary. The DPDO_OUTPUT_DIR
/// environment variable overrides the configured directory.
OutputPaths write_report(const ExperimentConfig& cfg, const ExperimentReport& report);

}  // namespace dpdo
