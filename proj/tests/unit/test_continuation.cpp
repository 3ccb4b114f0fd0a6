#include "asymbif/catalog.hpp"
#include "asymbif/continuation.hpp"
#include "asymbif/errors.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace asymbif;
using asymbif::testing::pt_tanh;
using asymbif::testing::unit_z;

TEST(Newton, LinearEigenpairIsExact) {
  const auto& pt = pt_tanh();
  const Index j = pt.split.w_indices[3];
  const Vector v = pt.op.eigenvectors.col(j);
  const double t = 12.0;
  const auto bp = newton_constrained(pt.op, catalog::zero(), t * v, pt.op.eigenvalues(j) + 0.01, t);
  EXPECT_NEAR(bp.lambda, pt.op.eigenvalues(j), 1e-10);
  EXPECT_NEAR(bp.norm, t, 1e-10 * t);
  EXPECT_LT(pt.op.mesh.norm(bp.u - t * v), 1e-8 * t);
}

TEST(Newton, PoschlTellerTanhFromReductionGuess) {
  const auto& pt = pt_tanh();
  const Vector z = 20.0 * unit_z(pt.split);
  const auto p = solve_w(pt.ctx, pt.op, pt.nl, 0.0, z);
  const auto bp = newton_constrained(pt.op, pt.nl, p.w + pt.split.embed(z), 0.0, 20.0);
  EXPECT_LE(bp.residual, 1e-10);
  EXPECT_NEAR(bp.norm, 20.0, 1e-10 * 20.0);
  const Vector zc = pt.split.z_coordinates(pt.op.mesh, bp.u);
  const auto q = solve_w(pt.ctx, pt.op, pt.nl, bp.lambda, zc);
  EXPECT_LE(pt.op.mesh.norm(q.w - pt.split.project_w(pt.op.mesh, bp.u)), 1e-8);
}

TEST(Newton, LargerNormMovesLambdaCloser) {
  const auto& pt = pt_tanh();
  Vector u = pt.split.embed(20.0 * unit_z(pt.split));
  double lam = 0.0, prev_err = std::numeric_limits<double>::infinity();
  for (double t : {20.0, 40.0, 80.0}) {
    const auto bp = newton_constrained(pt.op, pt.nl, u * (t / pt.op.mesh.norm(u)), lam, t);
    EXPECT_LT(std::abs(bp.lambda), prev_err * 1.05);
    prev_err = std::abs(bp.lambda);
    u = bp.u;
    lam = bp.lambda;
  }
}

TEST(Newton, Preconditions) {
  const auto& pt = pt_tanh();
  const Vector u = pt.split.embed(unit_z(pt.split));
  EXPECT_THROW(newton_constrained(pt.op, pt.nl, u, 0.0, -1.0), Error);
  Vector bad = u;
  bad(0) = std::nan("");
  EXPECT_THROW(newton_constrained(pt.op, pt.nl, bad, 0.0, 10.0), Error);
}

TEST(Verdict, Examples) {
  const std::vector<double> norms{10, 20, 40, 80};
  const auto c = verdict_of({-0.8, -0.9, -0.95, -0.98}, norms, -1.0, {0.05, 1.05, 4});
  EXPECT_EQ(c.kind, VerdictKind::converged);
  ASSERT_TRUE(c.rate_estimate.has_value());
  EXPECT_LT(*c.rate_estimate, 0.0);

  const auto flat = verdict_of({-1, -1, -1, -1}, norms, -1.0);
  EXPECT_EQ(flat.kind, VerdictKind::converged);
  EXPECT_FALSE(flat.rate_estimate.has_value());

  const auto osc = verdict_of({-0.7, -1.3, -0.75, -1.25}, norms, -1.0);
  EXPECT_EQ(osc.kind, VerdictKind::inconclusive);

  const auto away = verdict_of({-0.9, -0.8, -0.7, -0.6}, norms, -1.0);
  EXPECT_EQ(away.kind, VerdictKind::diverged);
}

TEST(Verdict, SlackAbsorbsSmallNoise) {
  const std::vector<double> norms{10, 20, 40, 80};
  EXPECT_EQ(verdict_of({0.04, 0.02, 0.0203, 0.01}, norms, 0.0).kind, VerdictKind::converged);
  EXPECT_NE(verdict_of({0.04, 0.02, 0.03, 0.01}, norms, 0.0).kind, VerdictKind::converged);
}

TEST(Verdict, TooFewPointsIsInconclusive) {
  EXPECT_EQ(verdict_of({0.01, 0.005}, {10, 20}, 0.0).kind, VerdictKind::inconclusive);
}

TEST(TraceBranch, ZeroNonlinearityStaysOnEigenline) {
  const auto& pt = pt_tanh();
  const auto b = trace_branch(pt.ctx, pt.op, catalog::zero(), unit_z(pt.split), {10, 20, 40, 80});
  ASSERT_EQ(b.points.size(), 4u);
  for (const auto& p : b.points) EXPECT_NEAR(p.lambda, 0.0, 1e-10);
  EXPECT_EQ(b.verdict.kind, VerdictKind::converged);
}

TEST(TraceBranch, PoschlTellerTanhConvergesWithOracleAgreement) {
  const auto& pt = pt_tanh();
  for (double sign : {1.0, -1.0}) {
    const auto b = trace_branch(pt.ctx, pt.op, pt.nl, sign * unit_z(pt.split), {10, 20, 40, 80, 160});
    ASSERT_EQ(b.points.size(), 5u) << b.abort_reason;
    EXPECT_EQ(b.verdict.kind, VerdictKind::converged) << b.verdict.reason;
    EXPECT_LT(std::abs(b.points.back().lambda + pt.lambda0 - (-1.0)), 0.05);
    for (std::size_t i = 1; i < b.points.size(); ++i) {
      EXPECT_LE(std::abs(b.points[i].lambda), 1.05 * std::abs(b.points[i - 1].lambda));
    }
    for (const auto& p : b.points) {
      EXPECT_LE(p.residual, 1e-9);
      EXPECT_NEAR(pt.op.mesh.norm(p.u), p.norm, 1e-9 * p.norm);
      ASSERT_TRUE(p.in_window);
      const double zn = p.z_norm;
      EXPECT_LE(p.oracle_gap, 1e-7 * (1 + zn));
      EXPECT_LE(p.reduced_residual, 1e-7 * (1 + zn));
      // independent re-check of the oracle gap
      const Vector zc = pt.split.z_coordinates(pt.op.mesh, p.u);
      const auto q = solve_w(pt.ctx, pt.op, pt.nl, p.lambda, zc);
      EXPECT_LE(pt.op.mesh.norm(q.w - pt.split.project_w(pt.op.mesh, p.u)), 1e-7 * (1 + zc.norm()));
      EXPECT_LE(reduced_map(pt.ctx, pt.op, pt.nl, p.lambda, zc).norm(), 1e-7 * (1 + zc.norm()));
    }
  }
}

// ||w||_inf along the branch stays below its large-norm limit at the same lambda.
TEST(TraceBranch, SupNormOfWStaysBounded) {
  const auto& pt = pt_tanh();
  const auto b = trace_branch(pt.ctx, pt.op, pt.nl, unit_z(pt.split), {10, 20, 40, 80, 160});
  for (const auto& p : b.points) {
    const double limit = solve_w(pt.ctx, pt.op, pt.nl, p.lambda, 1e5 * unit_z(pt.split)).w.lpNorm<Eigen::Infinity>();
    EXPECT_LE(p.w_sup_norm, 1.05 * limit);
  }
}

TEST(TraceBranch, BoundedNonlinearityRespectsSupBound) {
  const auto& pt = pt_tanh();
  const auto b = trace_branch(pt.ctx, pt.op, pt.nl, unit_z(pt.split), {10, 40, 160});
  ASSERT_NE(pt.nl.sign_mode, SignMode::none);
  for (const auto& p : b.points) {
    EXPECT_LE(eval_nemytskii(pt.nl, pt.op.mesh, p.u).lpNorm<Eigen::Infinity>(), *pt.nl.sup_declared);
  }
}

TEST(TraceBranch, ScheduleValidation) {
  const auto& pt = pt_tanh();
  EXPECT_THROW(trace_branch(pt.ctx, pt.op, pt.nl, unit_z(pt.split), {10, 5}), Error);
  EXPECT_THROW(trace_branch(pt.ctx, pt.op, pt.nl, unit_z(pt.split), {0.5, 5}), Error);
  EXPECT_THROW(trace_branch(pt.ctx, pt.op, pt.nl, Vector::Zero(1), {10, 20}), Error);
}

TEST(Scan, ZeroNonlinearityMatchesLinearFormula) {
  const auto& pt = pt_tanh();
  ScanOptions so;
  so.lambda_min = 0.05;
  so.lambda_max = pt.ctx.delta;
  so.lambda_points = 6;
  so.norm_min = 10;
  so.norm_max = 100;
  so.norm_points = 3;
  const auto r = zero_exclusion_scan(pt.ctx, pt.op, catalog::zero(), so);
  const double mu = pt.split.z_eigenvalues(0);
  EXPECT_NEAR(r.min_residual, std::abs(mu - 0.05) * 10.0, 1e-9);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.sign_changes, 0);
}

TEST(Scan, PoschlTellerTanhLocalizesTheBranch) {
  const auto& pt = pt_tanh();
  ScanOptions so;
  so.lambda_min = -pt.ctx.delta;
  so.lambda_max = pt.ctx.delta;
  so.norm_min = 10;
  so.norm_max = 160;
  so.norm_points = 5;
  const auto r = zero_exclusion_scan(pt.ctx, pt.op, pt.nl, so);
  EXPECT_FALSE(r.pass);
  ASSERT_FALSE(r.zeros.empty());
  const auto b = trace_branch(pt.ctx, pt.op, pt.nl, unit_z(pt.split), {10, 20, 40, 80, 160});
  int compared = 0;
  for (const auto& z : r.zeros) {
    // the scan parameterizes by ||z||, the branch by ||u||; compare at the nearest branch norm
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : b.points) {
      if (std::abs(std::log(p.norm / z.norm)) < 0.1) best = std::min(best, std::abs(p.lambda - z.lambda));
    }
    if (std::isfinite(best)) {
      EXPECT_LE(best, 0.02);
      ++compared;
    }
  }
  EXPECT_GT(compared, 0);
}

TEST(Scan, NeedsOneDimensionalKernel) {
  const auto op = build_synthetic({-1, 0, 0, 2}, EssentialSpectrum::half_line(3));
  const auto ctx = configure(spectral_split(op, 0.5), 0.1, 0.5);
  ScanOptions so;
  so.lambda_min = -0.1;
  so.lambda_max = 0.1;
  try {
    zero_exclusion_scan(ctx, op, catalog::tanh(0.1), so);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::scan_unsupported);
  }
}
