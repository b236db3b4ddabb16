#pragma once

// Experiment plans, the acceptance experiment registry, and report bundles.

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "decaylab/spectral_calculus.hpp"

namespace decaylab {

struct PotentialConfig {
  std::string kind = "bump";  // bump | sign_changing | zero
  double amplitude = -0.2;
  double lo = 1.2;
  double hi = 2.4;
  double c0 = 0.24;
  double c1 = 1.0;
  double delta0 = 3.0;

  PotentialSpec make() const;
};

struct Tolerances {
  double dispersive_slope_band = 0.05;
  double kirchhoff = 1e-3;
  double energy_slope = -1.7;
  double huygens = 1e-6;
  double partition = 1e-12;
  double kernel_constant = 1e-6;
  double kernel_diagonal = 1e-10;
  double resonance_stability = 0.10;
  double oracle = 1e-2;
  double scan_ratio = 10.0;
  double inverse_limit = 0.2;
  double difference_slope = 0.8;
  double strichartz_growth = 0.05;
  double besov_band = 5.0;
  double besov_refinement = 0.05;
};

struct ExperimentPlan {
  double obstacle_radius = 1.0;
  PotentialConfig potential;
  double points_per_unit = 36.0;  // radial nodes per unit length
  SpectralOptions spectral;
  double data_center = 2.5;       // smooth l = 0 data: bump on [center - width/2, center + width/2]
  double data_width = 2.0;
  double energy_radius = 3.0;     // R in E_R
  std::vector<double> lambdas;    // scan grid
  std::vector<double> times;      // decay-fit times
  std::vector<std::string> experiments;
  Tolerances tol;
  unsigned seed = 1234;
  unsigned threads = 1;

  /// Defaults with every registered experiment selected.
  static ExperimentPlan defaults();
};

/// Reads a flat INI plan. Unknown sections or keys, malformed values and inadmissible
/// potentials throw Error(config_error) naming the offending field.
ExperimentPlan load_config(const std::string& path);
ExperimentPlan parse_config(const std::string& text);

struct ReportRow {
  std::string experiment_id;
  std::string theorem_ref;
  double t_or_lambda = std::numeric_limits<double>::quiet_NaN();
  double value = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double ratio = std::numeric_limits<double>::quiet_NaN();
  double slope = std::numeric_limits<double>::quiet_NaN();
  double slope_ci = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
  bool operator==(const ReportRow&) const;
};

struct ExperimentReport {
  std::string id;
  std::string title;
  std::string theorem_ref;
  bool passed = false;
  std::string error;    // set when the experiment threw
  std::string summary;  // one line of key numbers
  std::vector<ReportRow> rows;
  bool operator==(const ExperimentReport&) const = default;
};

struct ReportBundle {
  std::string version;
  std::string plan_summary;  // grid, potential and spectral settings
  std::vector<ExperimentReport> experiments;
  bool all_passed() const;
  std::size_t row_count() const;
  bool operator==(const ReportBundle&) const = default;
};

struct ExperimentInfo {
  std::string id;
  std::string title;
  std::string theorem_ref;
};

const std::vector<ExperimentInfo>& list_experiments();

/// Runs the selected experiments on a pool of plan.threads workers; results keep plan order.
/// An experiment that throws is recorded as failed and the rest still run.
ReportBundle run_suite(const ExperimentPlan& plan);

std::string to_csv(const ReportBundle& bundle);
std::string to_json(const ReportBundle& bundle);
ReportBundle bundle_from_json(const std::string& text);
void emit_csv(const ReportBundle& bundle, const std::string& path);
void emit_json(const ReportBundle& bundle, const std::string& path);

const char* library_version();

}  // namespace decaylab
