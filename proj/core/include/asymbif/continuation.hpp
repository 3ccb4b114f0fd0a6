#pragma once

#include "asymbif/nonlinearity.hpp"
#include "asymbif/operator.hpp"
#include "asymbif/reduction.hpp"

#include <optional>
#include <string>
#include <vector>

namespace asymbif {

struct NewtonOptions {
  int max_iterations = 50;
  int max_halvings = 30;
  double tol = 1e-11;         // stop: residual <= tol (1 + T), | ||u|| - T | <= tol T
  double accept_tol = 1e-9;   // BranchPoint invariant
  double min_rcond = 1e-14;
};

struct BranchPoint {
  Vector u;
  double lambda = 0.0;
  double norm = 0.0;
  double residual = 0.0;
  int newton_iterations = 0;

  // Reduction cross-checks, filled by trace_branch. NaN when lambda is
  // outside the reduction window.
  double z_norm = 0.0;
  double w_sup_norm = 0.0;
  double oracle_gap = 0.0;
  double reduced_residual = 0.0;
  bool in_window = false;
};

// Solves L u - lambda u - N(u) = 0, (||u||^2 - T^2)/2 = 0 by damped bordered Newton.
BranchPoint newton_constrained(const Operator& op, const Nonlinearity& nl, const Vector& guess_u,
                               double guess_lambda, double target_norm, const NewtonOptions& opts = {});

enum class VerdictKind { converged, diverged, inconclusive };

const char* to_string(VerdictKind v);

struct VerdictOptions {
  double window = 0.05;
  double slack = 1.05;
  int min_points = 4;
};

struct BranchVerdict {
  VerdictKind kind = VerdictKind::inconclusive;
  double lambda_limit = 0.0;          // last lambda
  std::optional<double> rate_estimate;  // slope of log|lambda - lambda0| vs log norm
  std::string reason;
};

BranchVerdict verdict_of(const std::vector<double>& lambdas, const std::vector<double>& norms, double lambda0,
                         const VerdictOptions& opts = {});

struct Branch {
  Vector direction;  // unit, Z coordinates
  std::vector<BranchPoint> points;
  BranchVerdict verdict;
  std::string abort_reason;  // empty unless a Newton solve failed
};

BranchVerdict verdict_of(const Branch& branch, double lambda0, const VerdictOptions& opts = {});

struct TraceOptions {
  VerdictOptions verdict;
  NewtonOptions newton;
  bool diagnostics = true;
};

Branch trace_branch(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, const Vector& direction,
                    const std::vector<double>& norm_schedule, const TraceOptions& opts = {});

struct ScanOptions {
  double lambda_min = 0.0;
  double lambda_max = 0.0;
  int lambda_points = 20;
  double norm_min = 10.0;
  double norm_max = 200.0;
  int norm_points = 9;
  double floor = 0.0;
};

struct ScanZero {
  double norm = 0.0;
  int sign = 1;
  double lambda = 0.0;
  double residual = 0.0;
};

struct ScanReport {
  double min_residual = 0.0;  // min |F_lambda(+-t z)|
  double min_lambda = 0.0;
  double min_norm = 0.0;
  int min_sign = 1;
  double min_scaled = 0.0;  // min |F| / t
  int evaluations = 0;
  int failed_evaluations = 0;
  std::string first_failure;
  int sign_changes = 0;
  std::vector<ScanZero> zeros;
  double floor = 0.0;
  bool pass = false;
};

// Samples F_lambda(s t z_hat) for s = +-1 over a lambda x t grid (dim Z = 1);
// sign changes in lambda are refined to zeros. Passes when the minimum exceeds
// the floor with no sign change and no failed evaluation.
ScanReport zero_exclusion_scan(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                               const ScanOptions& opts);

}  // namespace asymbif
