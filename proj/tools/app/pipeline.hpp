#pragma once

#include "scenario.hpp"

#include "asymbif/continuation.hpp"
#include "asymbif/detection.hpp"
#include "asymbif/nonlinearity.hpp"
#include "asymbif/operator.hpp"
#include "asymbif/reduction.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace asymbif::app {

enum class Mode { full, check, scan };

struct RunOptions {
  Mode mode = Mode::full;
  bool grid_doubling = false;
  std::optional<std::uint64_t> seed;
  bool timing = false;
  bool regress = false;  // expectation mismatch turns the exit code into 1
};

struct GridDoubling {
  int n_points = 0;
  int n_points_doubled = 0;
  double lambda0 = 0.0;
  double lambda0_doubled = 0.0;
  double drift = 0.0;
  std::vector<double> isolated;          // isolated eigenvalues on n
  std::vector<double> isolated_doubled;  // same count on 2n
};

struct BranchRecord {
  std::string csv_name;
  Branch branch;
};

struct RunReport {
  Scenario scenario;
  Mode mode = Mode::full;
  std::uint64_t seed = 1;

  Operator op;  // shifted so that lambda0 = 0
  double lambda0_declared = 0.0;
  double lambda0 = 0.0;
  double gamma = 0.0;

  Nonlinearity nl;
  HypothesisReport hypotheses;
  bool hypotheses_ok = false;
  std::string hypothesis_failure;

  std::optional<ReductionContext> reduction;
  std::optional<WitnessReport> witnesses;
  std::vector<BranchRecord> branches;
  std::optional<ScanReport> scan;
  std::string scan_skipped;
  std::optional<GridDoubling> grid_doubling;

  std::string verdict;
  int exit_code = 0;
  std::vector<std::string> mismatches;
  int expectations_checked = 0;
  double wall_time = 0.0;
  bool timing = false;
};

Nonlinearity make_nonlinearity(const Scenario& sc);
Operator build_operator(const Scenario& sc, std::uint64_t seed);
PotentialSpec build_potential(const Scenario& sc);

RunReport run_scenario(const Scenario& sc, const RunOptions& opts);

json report_json(const RunReport& rep);
std::string branch_csv(const RunReport& rep, const BranchRecord& br);
std::string spectrum_csv(const RunReport& rep);

// name -> contents of every output file for this run.
std::vector<std::pair<std::string, std::string>> output_files(const RunReport& rep);

}  // namespace asymbif::app
