#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "racg/analysis.hpp"

namespace racg {

enum class ExperimentMode { DivGeodesic, DivPair, LowerDiv, Gersten, FreeProductCompare };

// Everything one experiment run needs. Populated from a preset, then a
// config file, then command-line flags; later sources win key by key.
struct ExperimentConfig {
  std::string preset;  // provenance only
  ExperimentMode mode = ExperimentMode::DivGeodesic;

  std::string graph = "gamma:2";      // gamma:<m> | omega:<m> | file:<path>
  std::string geodesic = "periodic";  // periodic | gamma | support
  std::string word;                   // periodic word; whitespace-separated names
  std::string support_type;           // generator name for support rays
  std::string support_type_b;         // second ray for pair mode
  int m = 2;
  std::string t = "2/1";

  int r_min = 1;
  int r_max = 8;
  int cap_radius = 0;  // 0 = auto (4r per radius)
  std::uint64_t cap_nodes = 50'000'000;
  int stab_delta = 2;

  std::int64_t window_lo = -10, window_hi = 10;  // lower-divergence window

  int fit_min = 0, fit_max = 0;  // 0 = use r_min/r_max
  std::optional<double> expected_exponent;
  double tol = 0.5;

  std::string out_dir = ".";
  int workers = 1;
  bool emit_dot = false;

  // Free-product comparison: the second graph and the matching geodesic.
  std::string compare_graph;
  std::string compare_word;
};

// Named presets wiring the bundled experiments; throws invalid_parameter
// on unknown names. Known: paper-flat, paper-alpha, paper-gamma,
// paper-ldiv, paper-freeproduct, paper-gersten.
ExperimentConfig experiment_preset(const std::string& name);
std::vector<std::string> experiment_preset_names();

// `key = value` text, '#' comments. Unknown keys are errors.
void apply_config_kv(ExperimentConfig& cfg, const std::string& key,
                     const std::string& value);
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

struct ExperimentResult {
  std::vector<DivergenceSample> samples;
  std::vector<DivergenceSample> compare_samples;  // FreeProductCompare only
  std::optional<FitReport> fit;
  std::optional<ExponentVerdict> exponent_verdict;
  bool compare_equal = true;      // FreeProductCompare: values match exactly
  std::string csv;                // primary samples as CSV text
  std::string report;             // plain-text summary with effective config
  std::string csv_path, report_path;  // set when files were written
};

// Runs the sweep on cfg.workers threads; CSV bytes are identical for any
// worker count. Writes <out>/samples.csv and <out>/report.txt when out_dir
// is non-empty.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Helpers shared with the CLI.
DefiningGraph resolve_graph(const std::string& selector);
GeodesicSpec resolve_geodesic(const DefiningGraph& g, const ExperimentConfig& cfg);

}  // namespace racg
