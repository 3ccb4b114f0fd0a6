#include "pipeline.hpp"

#include "asymbif/catalog.hpp"
#include "asymbif/errors.hpp"
#include "asymbif/potentials.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace asymbif::app {

namespace {

json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json vec(const Vector& v) {
  json a = json::array();
  for (Index i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json vec(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

std::string g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

SignMode parse_sign_mode(const std::string& s) {
  if (s == "f5_nonneg") return SignMode::f5_nonneg;
  if (s == "f5_nonpos") return SignMode::f5_nonpos;
  if (s == "f6_nonneg") return SignMode::f6_nonneg;
  if (s == "f6_nonpos") return SignMode::f6_nonpos;
  return SignMode::none;
}

std::vector<Vector> resolve_directions(const Scenario& sc, Index dim) {
  std::vector<Vector> out;
  if (sc.directions.empty()) {
    for (Index i = 0; i < dim; ++i) {
      for (double s : {1.0, -1.0}) {
        Vector d = Vector::Zero(dim);
        d(i) = s;
        out.push_back(d);
      }
    }
    return out;
  }
  for (std::size_t k = 0; k < sc.directions.size(); ++k) {
    const auto& spec = sc.directions[k];
    Vector d = Vector::Zero(dim);
    if (spec.index) {
      if (*spec.index >= dim) {
        throw Error(ErrorKind::invalid_spec, "/directions/" + std::to_string(k) + ": index " +
                                                 std::to_string(*spec.index) + " but dim Z is " + std::to_string(dim));
      }
      d(*spec.index) = spec.sign;
    } else {
      if (static_cast<Index>(spec.coefficients.size()) != dim) {
        throw Error(ErrorKind::invalid_spec, "/directions/" + std::to_string(k) + ": " +
                                                 std::to_string(spec.coefficients.size()) +
                                                 " coefficients but dim Z is " + std::to_string(dim));
      }
      for (Index i = 0; i < dim; ++i) d(i) = spec.sign * spec.coefficients[static_cast<std::size_t>(i)];
      if (d.norm() == 0.0) throw Error(ErrorKind::invalid_spec, "/directions/" + std::to_string(k) + ": zero vector");
    }
    out.push_back(d);
  }
  return out;
}

void run_scan(RunReport& rep) {
  const auto& ctx = *rep.reduction;
  if (ctx.split.dim() != 1) {
    rep.scan_skipped = "scan needs dim Z = 1, got " + std::to_string(ctx.split.dim());
    return;
  }
  ScanOptions so = rep.scenario.scan;
  so.lambda_min = -ctx.delta;
  so.lambda_max = ctx.delta;
  rep.scan = zero_exclusion_scan(ctx, rep.op, rep.nl, so);
}

std::string scan_verdict(const RunReport& rep) {
  if (!rep.scan) return "inconclusive";
  if (rep.scan->pass) return "no-bifurcation-in-window";
  if (rep.scan->failed_evaluations > 0) return "inconclusive";
  return "zeros-in-window";
}

void grid_doubling(RunReport& rep, const Scenario& sc) {
  if (sc.op.kind != OperatorKind::schrodinger1d) return;
  const PotentialSpec pot = build_potential(sc);
  const Grid grid(sc.op.half_width, sc.op.n_points);
  const Grid fine = grid.doubled();
  const Vector coarse = schrodinger_eigenvalues(grid, pot, 0.0);
  const Vector finer = schrodinger_eigenvalues(fine, pot, 0.0);
  const auto sigma = EssentialSpectrum::half_line(pot.v0_at_infinity);

  GridDoubling gd;
  gd.n_points = grid.n_points();
  gd.n_points_doubled = fine.n_points();
  gd.lambda0 = rep.lambda0;
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < finer.size(); ++i) {
    if (std::abs(finer(i) - rep.lambda0) < best) {
      best = std::abs(finer(i) - rep.lambda0);
      gd.lambda0_doubled = finer(i);
    }
  }
  gd.drift = std::abs(gd.lambda0_doubled - gd.lambda0);
  for (Index i = 0; i < coarse.size() && gd.isolated.size() < 10; ++i) {
    if (!sigma.contains(coarse(i))) {
      gd.isolated.push_back(coarse(i));
      gd.isolated_doubled.push_back(finer(i));
    }
  }
  rep.grid_doubling = gd;
}

std::string overall_verdict(const RunReport& rep) {
  bool any_converged = false;
  for (const auto& b : rep.branches) any_converged = any_converged || b.branch.verdict.kind == VerdictKind::converged;
  switch (rep.witnesses->verdict) {
    case WitnessVerdict::bifurcation_certified:
      return any_converged ? "bifurcation-certified" : "witness-without-branch";
    case WitnessVerdict::even_multiplicity_certified:
      return any_converged ? "even-multiplicity-certified" : "witness-without-branch";
    case WitnessVerdict::no_witness:
      break;
  }
  return "no-witness";
}

void check_expectations(RunReport& rep) {
  const auto& e = rep.scenario.expectations;
  auto mismatch = [&](const std::string& what, const std::string& want, const std::string& got) {
    rep.mismatches.push_back(what + ": expected " + want + ", got " + got);
  };
  if (e.verdict) {
    ++rep.expectations_checked;
    if (*e.verdict != rep.verdict) mismatch("verdict", *e.verdict, rep.verdict);
  }
  if (e.dist_condition) {
    ++rep.expectations_checked;
    const std::string got = rep.hypotheses.dist_condition.pass ? "pass" : "fail";
    if (*e.dist_condition != got) mismatch("dist_condition", *e.dist_condition, got);
  }
  if (e.exit_code) {
    ++rep.expectations_checked;
    if (*e.exit_code != rep.exit_code) mismatch("exit_code", std::to_string(*e.exit_code), std::to_string(rep.exit_code));
  }
  if (e.witness_verdict) {
    ++rep.expectations_checked;
    const std::string got = rep.witnesses ? to_string(rep.witnesses->verdict) : "none";
    if (*e.witness_verdict != got) mismatch("witness_verdict", *e.witness_verdict, got);
  }
  if (e.morse_difference) {
    ++rep.expectations_checked;
    const std::string got = rep.witnesses ? std::to_string(rep.witnesses->morse_m - rep.witnesses->morse_n) : "none";
    if (std::to_string(*e.morse_difference) != got) mismatch("morse_difference", std::to_string(*e.morse_difference), got);
  }
  if (e.scan_pass) {
    ++rep.expectations_checked;
    const std::string got = rep.scan ? (rep.scan->pass ? "true" : "false") : "not run";
    if ((*e.scan_pass ? "true" : "false") != got) mismatch("scan_pass", *e.scan_pass ? "true" : "false", got);
  }
  if (e.lambda_final) {
    ++rep.expectations_checked;
    if (rep.branches.empty() || rep.branches.front().branch.points.empty()) {
      mismatch("lambda_final", g17(*e.lambda_final), "no branch points");
    } else {
      const double got = rep.branches.front().branch.points.back().lambda + rep.lambda0;
      if (std::abs(got - *e.lambda_final) > e.lambda_final_tol) mismatch("lambda_final", g17(*e.lambda_final), g17(got));
    }
  }
}

const char* mode_name(Mode m) {
  switch (m) {
    case Mode::full: return "full";
    case Mode::check: return "check";
    case Mode::scan: return "scan";
  }
  return "full";
}

}  // namespace

PotentialSpec build_potential(const Scenario& sc) {
  auto terms = [&](const std::vector<TermSpec>& specs) {
    std::vector<potentials::Term> out;
    for (const auto& t : specs) {
      if (t.name == "sampled") {
        out.push_back(potentials::sampled(t.samples, t.params.at("half_width"), t.at_infinity));
      } else {
        out.push_back(potentials::make_term(t.name, t.params));
      }
    }
    return out;
  };
  return potentials::combine(terms(sc.op.v_terms), terms(sc.op.m_terms));
}

Nonlinearity make_nonlinearity(const Scenario& sc) {
  Nonlinearity nl = catalog::make(sc.nonlinearity, sc.nonlinearity_params);
  if (sc.sign_mode) nl.sign_mode = parse_sign_mode(*sc.sign_mode);
  return nl;
}

Operator build_operator(const Scenario& sc, std::uint64_t seed) {
  if (sc.op.kind == OperatorKind::schrodinger1d) {
    return build_schrodinger_1d(Grid(sc.op.half_width, sc.op.n_points), build_potential(sc), 0.0);
  }
  return sc.op.rotate ? build_synthetic_rotated(sc.op.eigenvalues, sc.op.sigma_e, seed)
                      : build_synthetic(sc.op.eigenvalues, sc.op.sigma_e);
}

RunReport run_scenario(const Scenario& sc, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  RunReport rep;
  rep.scenario = sc;
  rep.mode = opts.mode;
  rep.seed = opts.seed.value_or(sc.seed);
  rep.timing = opts.timing;
  rep.nl = make_nonlinearity(sc);

  const Operator op0 = build_operator(sc, rep.seed);
  rep.lambda0_declared = sc.lambda0.value_or(sc.lambda0_probe);
  rep.lambda0 = nearest_isolated_eigenvalue(op0, rep.lambda0_declared);
  if (sc.lambda0 && std::abs(rep.lambda0 - *sc.lambda0) > sc.band) {
    throw Error(ErrorKind::invalid_spec, "lambda0=" + g17(*sc.lambda0) +
                                             " is not within the band of an isolated eigenvalue (nearest " +
                                             g17(rep.lambda0) + ")");
  }
  rep.op = shift_operator(op0, rep.lambda0);
  rep.gamma = gamma_value(rep.op, 0.0);
  rep.hypotheses = hypothesis_report(rep.nl, rep.op, 0.0);

  const SpectralSplit split = spectral_split(rep.op, sc.band);
  const double beta = rep.hypotheses.lip_estimate;
  rep.hypotheses_ok = rep.hypotheses.dist_condition.pass;
  if (rep.hypotheses_ok) {
    try {
      rep.reduction = configure(split, beta, sc.safety);
    } catch (const ContractionInfeasibleError& e) {
      rep.hypotheses_ok = false;
      rep.hypothesis_failure = e.what();
    }
  } else {
    rep.hypothesis_failure = "Lip(g)=" + g17(rep.hypotheses.dist_condition.lip) + " is not below dist(lambda0, sigma_e)=" +
                             g17(rep.hypotheses.dist_condition.dist);
  }
  if (!rep.reduction) rep.reduction = configure_uncertified(split, beta, sc.safety);
  if (sc.tol_w) rep.reduction->tol_scale = *sc.tol_w;
  if (sc.max_iterations && rep.reduction->certified) rep.reduction->max_iterations = *sc.max_iterations;

  if (opts.grid_doubling) grid_doubling(rep, sc);

  const int hyp_exit = rep.hypotheses_ok ? 0 : 2;
  if (opts.mode == Mode::check) {
    rep.verdict = rep.hypotheses_ok ? "hypotheses-satisfied" : "hypotheses-failed";
    rep.exit_code = hyp_exit;
  } else if (opts.mode == Mode::scan || !rep.hypotheses_ok) {
    run_scan(rep);
    rep.verdict = scan_verdict(rep);
    rep.exit_code = hyp_exit;
  } else {
    const auto& ctx = *rep.reduction;
    WitnessReport w = parity_and_morse(ctx.split, ctx.delta);
    const Matrix kernel = kernel_basis(ctx.split, ctx.delta);
    const int samples = default_sphere_samples(static_cast<int>(kernel.cols()));
    attach_sign_checks(w, landesman_lazer_f5(rep.nl, rep.op.mesh, kernel, samples, rep.seed),
                       sign_condition_f6(rep.nl, rep.op.mesh, kernel, samples, rep.seed));
    rep.witnesses = w;

    TraceOptions topts;
    topts.verdict = sc.verdict;
    const auto dirs = resolve_directions(sc, ctx.split.dim());
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      BranchRecord rec;
      rec.csv_name = sc.name + ".branch-" + std::to_string(i) + ".csv";
      rec.branch = trace_branch(ctx, rep.op, rep.nl, dirs[i], sc.norm_schedule, topts);
      rep.branches.push_back(std::move(rec));
    }
    rep.verdict = overall_verdict(rep);
    rep.exit_code = 0;
  }

  check_expectations(rep);
  if (opts.regress && !rep.mismatches.empty()) rep.exit_code = 1;
  rep.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

namespace {

json flag_json(const FlagResult& f) { return {{"status", to_string(f.flag)}, {"witness", f.witness}}; }

json degree_json(const DegreeReport& d) {
  return {{"lambda", num(d.lambda)},
          {"negative_count", d.negative_count},
          {"degree", d.degree},
          {"valid_radius_note", d.valid_radius_note}};
}

json check_json(const IntegralCheck& c) {
  json j = {{"status", to_string(c.status)}, {"samples", c.samples}, {"note", c.note}};
  if (c.status != CheckStatus::not_applicable) {
    j["min_integral"] = num(c.min_integral);
    j["max_integral"] = num(c.max_integral);
  }
  return j;
}

}  // namespace

json report_json(const RunReport& rep) {
  json j;
  j["scenario"] = rep.scenario.source;

  const auto& op = rep.op;
  json opj = {{"kind", op.kind == OperatorKind::schrodinger1d ? "schrodinger1d" : "synthetic"},
              {"size", op.size()},
              {"lambda0_declared", num(rep.lambda0_declared)},
              {"lambda0", num(rep.lambda0)},
              {"sigma_e", op.sigma_e.shifted(-rep.lambda0).describe()},
              {"sigma_e_shifted", op.sigma_e.describe()},
              {"gamma", num(rep.gamma)},
              {"seed", rep.seed}};
  if (op.grid) {
    opj["grid"] = {{"half_width", op.grid->half_width()},
                   {"n_points", op.grid->n_points()},
                   {"spacing", op.grid->spacing()}};
  }
  j["operator"] = opj;

  const auto& h = rep.hypotheses;
  json hj;
  for (int i = 0; i < 6; ++i) hj["f" + std::to_string(i + 1)] = flag_json(h.f[static_cast<std::size_t>(i)]);
  hj["lip_estimate"] = num(h.lip_estimate);
  hj["lip_is_estimate"] = h.lip_is_estimate;
  hj["sign_mode"] = to_string(rep.nl.sign_mode);
  hj["dist_condition"] = {{"status", h.dist_condition.pass ? "pass" : "fail"},
                          {"lip", num(h.dist_condition.lip)},
                          {"dist", num(h.dist_condition.dist)},
                          {"margin", h.dist_condition.margin}};
  if (!rep.hypothesis_failure.empty()) hj["failure"] = rep.hypothesis_failure;
  j["hypotheses"] = hj;

  if (rep.reduction) {
    const auto& c = *rep.reduction;
    j["reduction"] = {{"certified", c.certified},
                      {"d", c.split.band},
                      {"dim_Z", c.split.dim()},
                      {"Z_eigenvalues", vec(c.split.z_eigenvalues)},
                      {"d_gap", num(c.split.d_gap)},
                      {"W_inverse_bound", num(c.split.w_inverse_bound)},
                      {"delta", num(c.delta)},
                      {"R", c.R},
                      {"beta", num(c.beta)},
                      {"k", num(c.k)},
                      {"c_lip", num(c.c_lip)},
                      {"c_graph", num(c.c_graph)},
                      {"gamma", num(rep.gamma)},
                      {"safety", c.safety},
                      {"tol_w_scale", c.tol_scale},
                      {"max_iterations", c.max_iterations}};
  } else {
    j["reduction"] = nullptr;
  }

  if (rep.witnesses) {
    const auto& w = *rep.witnesses;
    j["witnesses"] = {{"kernel_dim", w.kernel_dim},
                      {"parity_jump", w.parity_jump},
                      {"morse_m", w.morse_m},
                      {"morse_n", w.morse_n},
                      {"critical_groups_differ", w.critical_groups_differ},
                      {"critical_groups_note",
                       "c^q(phi_delta, K) = delta_{q,m} Z_2 and c^q(phi_-delta, K) = delta_{q,n} Z_2; "
                       "the groups differ iff m != n"},
                      {"degree_plus", degree_json(w.degree_plus)},
                      {"degree_minus", degree_json(w.degree_minus)},
                      {"ll_f5", check_json(w.ll_f5)},
                      {"ll_f6", check_json(w.ll_f6)},
                      {"verdict", to_string(w.verdict)}};
  } else {
    j["witnesses"] = nullptr;
  }

  json branches = json::array();
  for (std::size_t i = 0; i < rep.branches.size(); ++i) {
    const auto& rec = rep.branches[i];
    const auto& b = rec.branch;
    json bj = {{"index", i}, {"csv", rec.csv_name}, {"direction", vec(b.direction)}, {"points", b.points.size()}};
    std::vector<double> norms, lambdas;
    double max_res = 0.0, max_gap = 0.0, max_red = 0.0;
    for (const auto& p : b.points) {
      norms.push_back(p.norm);
      lambdas.push_back(p.lambda + rep.lambda0);
      max_res = std::max(max_res, p.residual);
      if (std::isfinite(p.oracle_gap)) max_gap = std::max(max_gap, p.oracle_gap);
      if (std::isfinite(p.reduced_residual)) max_red = std::max(max_red, p.reduced_residual);
    }
    bj["norms"] = vec(norms);
    bj["lambdas"] = vec(lambdas);
    bj["max_residual"] = num(max_res);
    bj["max_oracle_gap"] = num(max_gap);
    bj["max_reduced_residual"] = num(max_red);
    bj["verdict"] = {{"kind", to_string(b.verdict.kind)},
                     {"reason", b.verdict.reason},
                     {"lambda_limit", num(b.verdict.lambda_limit + rep.lambda0)},
                     {"lambda_error", num(std::abs(b.verdict.lambda_limit))},
                     {"rate_estimate", b.verdict.rate_estimate ? num(*b.verdict.rate_estimate) : json(nullptr)}};
    if (!b.abort_reason.empty()) bj["abort_reason"] = b.abort_reason;
    branches.push_back(bj);
  }
  j["branches"] = branches;

  if (rep.scan) {
    const auto& s = *rep.scan;
    json zeros = json::array();
    for (const auto& z : s.zeros) {
      zeros.push_back({{"norm", num(z.norm)},
                       {"sign", z.sign},
                       {"lambda", num(z.lambda + rep.lambda0)},
                       {"residual", num(z.residual)}});
    }
    j["scan"] = {{"status", s.pass ? "pass" : "fail"},
                 {"min_residual", num(s.min_residual)},
                 {"min_scaled_residual", num(s.min_scaled)},
                 {"at", {{"lambda", num(s.min_lambda + rep.lambda0)}, {"norm", num(s.min_norm)}, {"sign", s.min_sign}}},
                 {"floor", num(s.floor)},
                 {"evaluations", s.evaluations},
                 {"failed_evaluations", s.failed_evaluations},
                 {"sign_changes", s.sign_changes},
                 {"zeros", zeros}};
    if (!s.first_failure.empty()) j["scan"]["first_failure"] = s.first_failure;
  } else if (!rep.scan_skipped.empty()) {
    j["scan"] = {{"status", "unsupported"}, {"note", rep.scan_skipped}};
  }

  if (rep.grid_doubling) {
    const auto& g = *rep.grid_doubling;
    j["grid_doubling"] = {{"n_points", g.n_points},
                          {"n_points_doubled", g.n_points_doubled},
                          {"lambda0", num(g.lambda0)},
                          {"lambda0_doubled", num(g.lambda0_doubled)},
                          {"drift", num(g.drift)},
                          {"isolated", vec(g.isolated)},
                          {"isolated_doubled", vec(g.isolated_doubled)}};
  }

  json vj = {{"overall", rep.verdict}, {"mode", mode_name(rep.mode)}, {"exit_code", rep.exit_code}};
  int converged = 0;
  for (const auto& b : rep.branches) converged += b.branch.verdict.kind == VerdictKind::converged ? 1 : 0;
  vj["branches_converged"] = converged;
  vj["expectations"] = {{"checked", rep.expectations_checked}, {"mismatches", rep.mismatches}};
  j["verdict"] = vj;
  if (rep.timing) j["wall_time_s"] = rep.wall_time;
  return j;
}

std::string branch_csv(const RunReport& rep, const BranchRecord& rec) {
  std::ostringstream os;
  os << "norm,lambda,residual,newton_iterations,w_sup_norm\n";
  for (const auto& p : rec.branch.points) {
    os << g17(p.norm) << ',' << g17(p.lambda + rep.lambda0) << ',' << g17(p.residual) << ',' << p.newton_iterations
       << ',' << g17(p.w_sup_norm) << '\n';
  }
  return os.str();
}

std::string spectrum_csv(const RunReport& rep) {
  std::ostringstream os;
  os << "index,eigenvalue,shifted,in_Z,isolated\n";
  const auto& op = rep.op;
  const double d = rep.reduction ? rep.reduction->split.band : 0.0;
  for (Index i = 0; i < op.eigenvalues.size(); ++i) {
    const double mu = op.eigenvalues(i);
    os << i << ',' << g17(mu + rep.lambda0) << ',' << g17(mu) << ',' << (std::abs(mu) <= d ? 1 : 0) << ','
       << (op.sigma_e.contains(mu) ? 0 : 1) << '\n';
  }
  return os.str();
}

std::vector<std::pair<std::string, std::string>> output_files(const RunReport& rep) {
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back(rep.scenario.name + ".report.json", report_json(rep).dump(2) + "\n");
  for (const auto& b : rep.branches) files.emplace_back(b.csv_name, branch_csv(rep, b));
  files.emplace_back(rep.scenario.name + ".spectrum.csv", spectrum_csv(rep));
  return files;
}

}  // namespace asymbif::app
