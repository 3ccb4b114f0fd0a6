#pragma once

#include "asymbif/continuation.hpp"
#include "asymbif/operator.hpp"

#include <json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace asymbif::app {

using json = nlohmann::json;

struct SchemaIssue {
  std::string path;  // JSON pointer
  std::string message;
};

class SchemaError : public std::runtime_error {
 public:
  explicit SchemaError(std::vector<SchemaIssue> issues);
  const std::vector<SchemaIssue>& issues() const { return issues_; }

 private:
  std::vector<SchemaIssue> issues_;
};

struct TermSpec {
  std::string name;  // catalog name, or "sampled"
  std::map<std::string, double> params;
  std::vector<double> samples;
  double at_infinity = 0.0;
};

struct OperatorConfig {
  OperatorKind kind = OperatorKind::schrodinger1d;
  double half_width = 0.0;
  int n_points = 0;
  std::vector<TermSpec> v_terms, m_terms;
  std::vector<double> eigenvalues;
  EssentialSpectrum sigma_e;
  bool rotate = false;
};

struct DirectionSpec {
  std::optional<int> index;
  double sign = 1.0;
  std::vector<double> coefficients;
};

struct Expectations {
  std::optional<std::string> verdict;
  std::optional<std::string> dist_condition;
  std::optional<int> exit_code;
  std::optional<std::string> witness_verdict;
  std::optional<int> morse_difference;
  std::optional<bool> scan_pass;
  std::optional<double> lambda_final;
  double lambda_final_tol = 0.0;
};

struct Scenario {
  int version = 1;
  std::string name;
  OperatorConfig op;
  std::string nonlinearity;
  std::map<std::string, double> nonlinearity_params;
  std::optional<std::string> sign_mode;
  std::optional<double> lambda0;  // declared
  double lambda0_probe = 0.0;     // used when lambda0 is "auto"
  double band = 0.5;
  double safety = 0.5;
  std::vector<double> norm_schedule{10.0, 20.0, 40.0, 80.0, 160.0};
  std::vector<DirectionSpec> directions;  // empty: every Z basis vector, both signs
  VerdictOptions verdict;
  ScanOptions scan;  // lambda range filled from delta at run time
  std::optional<double> tol_w;
  std::optional<int> max_iterations;
  std::uint64_t seed = 1;
  Expectations expectations;
  json source;
};

Scenario parse_scenario(const json& doc);
Scenario load_scenario(const std::string& path);

}  // namespace asymbif::app
