#include "app/pipeline.hpp"
#include "app/scenario.hpp"

#include "asymbif/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace {

struct Outcome {
  int exit_code = 1;
  std::string out;  // stdout text
  std::string err;  // stderr text
};

Outcome run_one(const std::string& path, const asymbif::app::RunOptions& opts, const std::string& out_dir,
                bool json_only) {
  using namespace asymbif::app;
  Outcome o;
  try {
    const Scenario sc = load_scenario(path);
    const RunReport rep = run_scenario(sc, opts);
    if (json_only) {
      o.out = report_json(rep).dump(2) + "\n";
    } else {
      std::filesystem::create_directories(out_dir);
      for (const auto& [name, text] : output_files(rep)) {
        const auto file = std::filesystem::path(out_dir) / name;
        std::ofstream f(file, std::ios::binary);
        f << text;
        if (!f) throw std::runtime_error("cannot write " + file.string());
      }
      std::ostringstream os;
      os << sc.name << ": " << rep.verdict << " (exit " << rep.exit_code << ")";
      if (!rep.hypothesis_failure.empty()) os << " [" << rep.hypothesis_failure << "]";
      os << "\n";
      o.out = os.str();
    }
    for (const auto& m : rep.mismatches) o.err += sc.name + ": expectation mismatch: " + m + "\n";
    o.exit_code = rep.exit_code;
  } catch (const SchemaError& e) {
    for (const auto& issue : e.issues()) o.err += path + ": " + issue.path + ": " + issue.message + "\n";
    if (e.issues().empty()) o.err += path + ": " + e.what() + "\n";
  } catch (const std::exception& e) {
    o.err = path + ": " + e.what() + "\n";
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"asymbif: asymptotic bifurcation analysis for asymptotically linear Schrodinger problems"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run one or more scenario files");
  std::vector<std::string> files;
  bool check = false, scan = false, grid_doubling = false, json_only = false, timing = false, regress = false;
  unsigned jobs = 1;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  run->add_option("scenarios", files, "Scenario JSON files")->required()->check(CLI::ExistingFile);
  auto* check_flag = run->add_flag("--check", check, "Hypotheses and reduction constants only");
  auto* scan_flag = run->add_flag("--scan", scan, "Zero-exclusion scan only");
  check_flag->excludes(scan_flag);
  run->add_flag("--grid-doubling", grid_doubling, "Recompute the spectrum on 2n points and report drift");
  run->add_option("--jobs,-j", jobs, "Scenario files run concurrently")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--out,-o", out_dir, "Output directory");
  run->add_flag("--json-only", json_only, "Print the report JSON to stdout and write no files");
  run->add_flag("--timing", timing, "Include wall time in the report");
  run->add_flag("--regress", regress, "Exit 1 when a scenario's expectations do not match");

  CLI11_PARSE(app, argc, argv);

  asymbif::app::RunOptions opts;
  opts.mode = check ? asymbif::app::Mode::check : scan ? asymbif::app::Mode::scan : asymbif::app::Mode::full;
  opts.grid_doubling = grid_doubling;
  if (seed_opt->count() > 0) opts.seed = seed;
  opts.timing = timing;
  opts.regress = regress;

  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) outcomes[i] = run_one(files[i], opts, out_dir, json_only);
  };
  const unsigned n_threads = std::min<unsigned>(jobs, static_cast<unsigned>(files.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = 0;
  for (const auto& o : outcomes) {
    std::cout << o.out;
    std::cerr << o.err;
    if (o.exit_code == 1) code = 1;
    else if (o.exit_code == 2 && code == 0) code = 2;
  }
  return code;
}
