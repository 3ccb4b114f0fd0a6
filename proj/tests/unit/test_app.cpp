#include "app/pipeline.hpp"
#include "app/scenario.hpp"
#include "asymbif/errors.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <fstream>

using namespace asymbif;
using namespace asymbif::app;
using asymbif::testing::scenario_path;

namespace {

json load(const std::string& name) {
  std::ifstream in(scenario_path(name));
  return json::parse(in);
}

std::vector<SchemaIssue> issues_of(const json& doc) {
  try {
    parse_scenario(doc);
  } catch (const SchemaError& e) {
    return e.issues();
  }
  return {};
}

bool has_issue(const std::vector<SchemaIssue>& issues, const std::string& path) {
  for (const auto& i : issues) {
    if (i.path == path) return true;
  }
  return false;
}

}  // namespace

TEST(Scenario, ShippedScenariosParse) {
  for (const char* name : {"pt_tanh", "double_kernel", "stuart_sharp", "pt_rational"}) {
    const auto sc = load_scenario(scenario_path(name));
    EXPECT_EQ(sc.name, name);
    EXPECT_EQ(sc.version, 1);
  }
}

TEST(Scenario, SchemaErrorsCarryPointers) {
  json doc = load("pt_tanh");
  doc["extra"] = 1;
  doc["nonlinearity"]["name"] = "tahn";
  doc["norm_schedule"] = {10, 10};
  doc["operator"]["grid"]["n_points"] = 2;
  doc["directions"] = {json::object({{"index", 0}, {"coefficients", {1.0}}})};
  doc.erase("version");
  const auto issues = issues_of(doc);
  EXPECT_TRUE(has_issue(issues, "/extra"));
  EXPECT_TRUE(has_issue(issues, "/version"));
  EXPECT_TRUE(has_issue(issues, "/nonlinearity/name"));
  EXPECT_TRUE(has_issue(issues, "/norm_schedule/1"));
  EXPECT_TRUE(has_issue(issues, "/operator/grid/n_points"));
  EXPECT_TRUE(has_issue(issues, "/directions/0"));
  for (const auto& i : issues) {
    if (i.path == "/nonlinearity/name") {
      EXPECT_NE(i.message.find("known: zero, linear, tanh"), std::string::npos);
    }
  }
}

TEST(Scenario, UnknownPotentialAndParameters) {
  json doc = load("pt_tanh");
  doc["operator"]["potential"]["V"][0]["name"] = "square_well";
  doc["nonlinearity"]["params"] = {{"kappa", 1.0}};
  const auto issues = issues_of(doc);
  EXPECT_TRUE(has_issue(issues, "/operator/potential/V/0/name"));
  EXPECT_TRUE(has_issue(issues, "/nonlinearity/params"));
}

TEST(Scenario, VersionMustBeOne) {
  json doc = load("pt_tanh");
  doc["version"] = 2;
  EXPECT_TRUE(has_issue(issues_of(doc), "/version"));
}

TEST(Scenario, NonFiniteNumbersRejected) {
  json doc = load("pt_tanh");
  doc["band"] = -0.5;
  doc["lambda0"] = "minus one";
  const auto issues = issues_of(doc);
  EXPECT_TRUE(has_issue(issues, "/band"));
  EXPECT_TRUE(has_issue(issues, "/lambda0"));
}

TEST(Pipeline, DeclaredLambdaFarFromSpectrumIsRejected) {
  json doc = load("pt_tanh");
  doc["lambda0"] = -3.0;
  const auto sc = parse_scenario(doc);
  EXPECT_THROW(run_scenario(sc, {}), Error);
}

TEST(Pipeline, CheckModeReportsHypothesesOnly) {
  RunOptions opts;
  opts.mode = Mode::check;
  const auto rep = run_scenario(load_scenario(scenario_path("pt_tanh")), opts);
  EXPECT_EQ(rep.exit_code, 0);
  EXPECT_TRUE(rep.branches.empty());
  const auto j = report_json(rep);
  for (const char* key : {"scenario", "hypotheses", "reduction", "witnesses", "branches", "verdict"}) {
    EXPECT_TRUE(j.contains(key)) << key;
  }
  EXPECT_FALSE(j.contains("wall_time_s"));
}

TEST(Pipeline, HypothesisFailureRunsOnlyTheScan) {
  json doc = load("pt_tanh");
  doc["nonlinearity"] = {{"name", "gauss_odd"}, {"params", {{"kappa", 1.5}}}};
  doc["scan"] = {{"lambda_points", 4}, {"norm_points", 2}};
  doc.erase("expectations");
  const auto rep = run_scenario(parse_scenario(doc), {});
  EXPECT_EQ(rep.exit_code, 2);
  EXPECT_FALSE(rep.hypotheses.dist_condition.pass);
  EXPECT_TRUE(rep.branches.empty());
  EXPECT_FALSE(rep.witnesses.has_value());
  EXPECT_TRUE(rep.scan.has_value());
}

TEST(Pipeline, VerdictNeedsWitnessAndConvergedBranch) {
  const auto rep = run_scenario(load_scenario(scenario_path("pt_tanh")), {});
  EXPECT_EQ(rep.verdict, "bifurcation-certified");
  ASSERT_TRUE(rep.witnesses.has_value());
  EXPECT_NE(rep.witnesses->verdict, WitnessVerdict::no_witness);
  bool converged = false;
  for (const auto& b : rep.branches) converged = converged || b.branch.verdict.kind == VerdictKind::converged;
  EXPECT_TRUE(converged);
  EXPECT_TRUE(rep.mismatches.empty());

  json doc = load("pt_tanh");
  doc["verdict"] = {{"window", 1e-6}};
  doc.erase("expectations");
  const auto tight = run_scenario(parse_scenario(doc), {});
  EXPECT_EQ(tight.verdict, "witness-without-branch");
}

TEST(Pipeline, OutputFilesAndDeterminism) {
  const auto sc = load_scenario(scenario_path("double_kernel"));
  const auto a = output_files(run_scenario(sc, {}));
  const auto b = output_files(run_scenario(sc, {}));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].first, b[i].first);
    EXPECT_EQ(a[i].second, b[i].second) << a[i].first;
  }
  EXPECT_EQ(a.front().first, "double_kernel.report.json");
  EXPECT_EQ(a[1].first, "double_kernel.branch-0.csv");
  EXPECT_EQ(a[1].second.substr(0, a[1].second.find('\n')), "norm,lambda,residual,newton_iterations,w_sup_norm");
  EXPECT_EQ(a.back().first, "double_kernel.spectrum.csv");
}

TEST(Pipeline, SeedOverrideIsRecorded) {
  const auto sc = load_scenario(scenario_path("double_kernel"));
  RunOptions opts;
  opts.mode = Mode::check;
  opts.seed = 99;
  const auto rep = run_scenario(sc, opts);
  EXPECT_EQ(rep.seed, 99u);
  EXPECT_EQ(report_json(rep)["operator"]["seed"], 99);
}
