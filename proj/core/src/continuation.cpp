#include "asymbif/continuation.hpp"

#include "asymbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace asymbif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

struct Residual {
  Vector r;
  double c = 0.0;
  double r_norm = 0.0;
};

Residual full_residual(const Operator& op, const Nonlinearity& nl, const Vector& u, double lambda, double target) {
  Residual res;
  res.r = op.apply(u) - lambda * u - eval_nemytskii(nl, op.mesh, u);
  res.c = 0.5 * (op.mesh.dot(u, u) - target * target);
  res.r_norm = op.mesh.norm(res.r);
  return res;
}

double merit(const Residual& r, double target) { return r.r_norm + std::abs(r.c) / target; }

bool converged(const Operator& op, const Vector& u, const Residual& r, double target, double tol) {
  return r.r_norm <= tol * (1.0 + target) && std::abs(op.mesh.norm(u) - target) <= tol * target;
}

}  // namespace

BranchPoint newton_constrained(const Operator& op, const Nonlinearity& nl, const Vector& guess_u,
                               double guess_lambda, double target_norm, const NewtonOptions& opts) {
  if (!(std::isfinite(target_norm) && target_norm > 0.0)) {
    throw Error(ErrorKind::invalid_spec, "target_norm must be positive");
  }
  if (!guess_u.allFinite() || !std::isfinite(guess_lambda)) throw Error(ErrorKind::invalid_spec, "guess not finite");
  const Index n = op.size();
  Vector u = guess_u;
  double lambda = guess_lambda;
  Residual res = full_residual(op, nl, u, lambda, target_norm);
  int it = 0;
  for (; it < opts.max_iterations && !converged(op, u, res, target_norm, opts.tol); ++it) {
    Matrix j(n + 1, n + 1);
    j.topLeftCorner(n, n) = op.matrix;
    j.topLeftCorner(n, n).diagonal() -= Vector::Constant(n, lambda) + eval_nemytskii_derivative(nl, op.mesh, u);
    j.topRightCorner(n, 1) = -u;
    j.bottomLeftCorner(1, n) = op.mesh.weight * u.transpose();
    j(n, n) = 0.0;
    Vector rhs(n + 1);
    rhs.head(n) = -res.r;
    rhs(n) = -res.c;
    Eigen::PartialPivLU<Matrix> lu(j);
    const double rc = lu.rcond();
    if (!(rc >= opts.min_rcond)) {
      throw Error(ErrorKind::singular_bordered_system, "condition estimate " + fmt(1.0 / rc) + " at iteration " +
                                                           std::to_string(it));
    }
    const Vector step = lu.solve(rhs);
    const double m0 = merit(res, target_norm);
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= opts.max_halvings; ++h, t *= 0.5) {
      Vector u_try = u + t * step.head(n);
      const double l_try = lambda + t * step(n);
      Residual r_try = full_residual(op, nl, u_try, l_try, target_norm);
      if (merit(r_try, target_norm) < m0) {
        u = std::move(u_try);
        lambda = l_try;
        res = std::move(r_try);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      ++it;
      break;
    }
  }
  if (!converged(op, u, res, target_norm, opts.accept_tol)) {
    throw Error(ErrorKind::no_convergence, "bordered Newton at norm " + fmt(target_norm) + ": residual " +
                                               fmt(res.r_norm) + " after " + std::to_string(it) + " iterations");
  }
  BranchPoint p;
  p.u = std::move(u);
  p.lambda = lambda;
  p.norm = op.mesh.norm(p.u);
  p.residual = res.r_norm;
  p.newton_iterations = it;
  return p;
}

const char* to_string(VerdictKind v) {
  switch (v) {
    case VerdictKind::converged: return "converged";
    case VerdictKind::diverged: return "diverged";
    case VerdictKind::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

BranchVerdict verdict_of(const std::vector<double>& lambdas, const std::vector<double>& norms, double lambda0,
                         const VerdictOptions& opts) {
  BranchVerdict v;
  const std::size_t n = std::min(lambdas.size(), norms.size());
  if (n == 0) {
    v.reason = "no points";
    return v;
  }
  v.lambda_limit = lambdas[n - 1];

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = std::abs(lambdas[i] - lambda0);
    if (e > 0.0 && norms[i] > 0.0) {
      lx.push_back(std::log(norms[i]));
      ly.push_back(std::log(e));
    }
  }
  if (lx.size() >= 2) {
    const double k = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      mx += lx[i] / k;
      my += ly[i] / k;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sxx += (lx[i] - mx) * (lx[i] - mx);
      sxy += (lx[i] - mx) * (ly[i] - my);
      syy += (ly[i] - my) * (ly[i] - my);
    }
    if (sxx > 0.0 && syy > 0.0) v.rate_estimate = sxy / sxx;
  }

  const auto need = static_cast<std::size_t>(std::max(opts.min_points, 1));
  if (n < need) {
    v.reason = "fewer than " + std::to_string(need) + " points";
    return v;
  }
  bool non_increasing = true, non_decreasing = true;
  for (std::size_t i = n - need + 1; i < n; ++i) {
    const double prev = std::abs(lambdas[i - 1] - lambda0);
    const double cur = std::abs(lambdas[i] - lambda0);
    non_increasing = non_increasing && cur <= opts.slack * prev;
    non_decreasing = non_decreasing && cur * opts.slack >= prev;
  }
  const double last = std::abs(lambdas[n - 1] - lambda0);
  if (non_increasing && last < opts.window) {
    v.kind = VerdictKind::converged;
    v.reason = "errors non-increasing, final " + fmt(last) + " < window";
  } else if (last >= opts.window && non_decreasing) {
    v.kind = VerdictKind::diverged;
    v.reason = "final error " + fmt(last) + " outside window and not decreasing";
  } else {
    v.reason = non_increasing ? "final error " + fmt(last) + " outside window" : "errors not monotone";
  }
  return v;
}

BranchVerdict verdict_of(const Branch& branch, double lambda0, const VerdictOptions& opts) {
  std::vector<double> l, t;
  for (const auto& p : branch.points) {
    l.push_back(p.lambda);
    t.push_back(p.norm);
  }
  auto v = verdict_of(l, t, lambda0, opts);
  if (!branch.abort_reason.empty() && v.kind != VerdictKind::converged) {
    v.kind = VerdictKind::inconclusive;
    v.reason = "aborted: " + branch.abort_reason;
  }
  return v;
}

Branch trace_branch(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, const Vector& direction,
                    const std::vector<double>& norm_schedule, const TraceOptions& opts) {
  const auto& split = ctx.split;
  if (direction.size() != split.dim()) throw Error(ErrorKind::invalid_spec, "direction size differs from dim Z");
  const double dn = direction.norm();
  if (!(dn > 0.0)) throw Error(ErrorKind::invalid_spec, "direction must be nonzero");
  if (norm_schedule.empty() || norm_schedule.front() < 1.0) {
    throw Error(ErrorKind::invalid_spec, "norm schedule must start at >= 1");
  }
  for (std::size_t i = 1; i < norm_schedule.size(); ++i) {
    if (!(norm_schedule[i] > norm_schedule[i - 1])) {
      throw Error(ErrorKind::invalid_spec, "norm schedule must be strictly increasing");
    }
  }

  Branch br;
  br.direction = direction / dn;
  Vector dir = br.direction;
  // Rayleigh quotient of L at z = t dir is independent of t.
  double lambda_prev = dir.cwiseProduct(dir).dot(split.z_eigenvalues);

  for (double t : norm_schedule) {
    const Vector zc = t * dir;
    Vector u0 = split.embed(zc);
    try {
      const double lg = std::clamp(lambda_prev, -ctx.delta, ctx.delta);
      u0 += solve_w(ctx, op, nl, lg, zc).w;
    } catch (const Error&) {
      // fall back to the bare Z guess
    }
    BranchPoint p;
    try {
      p = newton_constrained(op, nl, u0, lambda_prev, t, opts.newton);
    } catch (const Error& e) {
      br.abort_reason = e.what();
      break;
    }
    const Vector zcoords = split.z_coordinates(op.mesh, p.u);
    const Vector wpart = p.u - split.embed(zcoords);
    p.z_norm = zcoords.norm();
    p.w_sup_norm = wpart.lpNorm<Eigen::Infinity>();
    p.in_window = std::abs(p.lambda) <= ctx.delta;
    p.oracle_gap = kNaN;
    p.reduced_residual = kNaN;
    if (opts.diagnostics && p.in_window) {
      try {
        const auto ev = evaluate_reduced(ctx, op, nl, p.lambda, zcoords);
        p.oracle_gap = op.mesh.norm(wpart - ev.point.w);
        p.reduced_residual = ev.gradient.norm();
      } catch (const Error&) {
        // leave NaN; the report shows the missing cross-check
      }
    }
    lambda_prev = p.lambda;
    if (p.z_norm > 0.0) dir = zcoords / p.z_norm;
    br.points.push_back(std::move(p));
  }
  br.verdict = verdict_of(br, 0.0, opts.verdict);
  return br;
}

namespace {

struct Sample {
  double f = kNaN;  // signed F for dim Z = 1
  Vector w;
  bool ok = false;
};

Sample sample_at(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda, double z,
                 const Vector* warm, ScanReport& rep) {
  Sample s;
  ++rep.evaluations;
  try {
    const auto ev = evaluate_reduced(ctx, op, nl, lambda, Vector::Constant(1, z), warm);
    s.f = ev.gradient(0);
    s.w = ev.point.w;
    s.ok = std::isfinite(s.f);
  } catch (const Error& e) {
    if (rep.first_failure.empty()) rep.first_failure = e.what();
  }
  if (!s.ok) ++rep.failed_evaluations;
  return s;
}

// Illinois regula falsi on lambda in [a, b] where F changes sign.
ScanZero refine_zero(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double z, double a,
                     double fa, double b, double fb, Vector w, ScanReport& rep) {
  ScanZero zero;
  zero.norm = std::abs(z);
  zero.sign = z >= 0.0 ? 1 : -1;
  int side = 0;
  double c = a, fc = fa;
  for (int it = 0; it < 60; ++it) {
    c = (a * fb - b * fa) / (fb - fa);
    const Sample s = sample_at(ctx, op, nl, c, z, &w, rep);
    if (!s.ok) {
      zero.lambda = 0.5 * (a + b);
      zero.residual = kNaN;
      return zero;
    }
    fc = s.f;
    w = s.w;
    if (std::abs(fc) <= 1e-10 * (1.0 + std::abs(z)) || std::abs(b - a) <= 1e-14) break;
    if ((fc > 0.0) == (fb > 0.0)) {
      b = c;
      fb = fc;
      if (side == -1) fa *= 0.5;
      side = -1;
    } else {
      a = c;
      fa = fc;
      if (side == 1) fb *= 0.5;
      side = 1;
    }
  }
  zero.lambda = c;
  zero.residual = std::abs(fc);
  return zero;
}

}  // namespace

ScanReport zero_exclusion_scan(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                               const ScanOptions& opts) {
  if (ctx.split.dim() != 1) {
    throw Error(ErrorKind::scan_unsupported, "zero-exclusion scan needs dim Z = 1, got " +
                                                 std::to_string(ctx.split.dim()));
  }
  if (!(opts.lambda_max > opts.lambda_min) || opts.lambda_points < 2 || opts.norm_points < 1 ||
      !(opts.norm_min > 0.0) || !(opts.norm_max >= opts.norm_min)) {
    throw Error(ErrorKind::invalid_spec, "scan ranges are empty or inverted");
  }
  ScanReport rep;
  rep.floor = opts.floor;
  rep.min_residual = std::numeric_limits<double>::infinity();
  rep.min_scaled = std::numeric_limits<double>::infinity();

  std::vector<double> lambdas(static_cast<std::size_t>(opts.lambda_points));
  for (int j = 0; j < opts.lambda_points; ++j) {
    lambdas[static_cast<std::size_t>(j)] =
        opts.lambda_min + (opts.lambda_max - opts.lambda_min) * j / (opts.lambda_points - 1);
  }
  std::vector<double> norms(static_cast<std::size_t>(opts.norm_points));
  for (int i = 0; i < opts.norm_points; ++i) {
    norms[static_cast<std::size_t>(i)] =
        opts.norm_points == 1 ? opts.norm_min
                              : opts.norm_min * std::pow(opts.norm_max / opts.norm_min,
                                                         static_cast<double>(i) / (opts.norm_points - 1));
  }

  for (int sign : {1, -1}) {
    Vector first_w;  // warm start for the first lambda at the next norm
    for (double t : norms) {
      const double z = sign * t;
      Vector w = first_w;
      Sample prev;
      double prev_lambda = 0.0;
      for (std::size_t j = 0; j < lambdas.size(); ++j) {
        const double lambda = lambdas[j];
        const Sample s = sample_at(ctx, op, nl, lambda, z, w.size() ? &w : nullptr, rep);
        if (!s.ok) {
          prev = Sample{};
          continue;
        }
        if (j == 0) first_w = s.w;
        w = s.w;
        const double r = std::abs(s.f);
        if (r < rep.min_residual) {
          rep.min_residual = r;
          rep.min_lambda = lambda;
          rep.min_norm = t;
          rep.min_sign = sign;
        }
        rep.min_scaled = std::min(rep.min_scaled, r / t);
        if (s.f == 0.0) {
          ++rep.sign_changes;
          rep.zeros.push_back({t, sign, lambda, 0.0});
        } else if (prev.ok && prev.f != 0.0 && (prev.f > 0.0) != (s.f > 0.0)) {
          ++rep.sign_changes;
          const ScanZero zr = refine_zero(ctx, op, nl, z, prev_lambda, prev.f, lambda, s.f, prev.w, rep);
          if (zr.residual < rep.min_residual) {
            rep.min_residual = zr.residual;
            rep.min_lambda = zr.lambda;
            rep.min_norm = t;
            rep.min_sign = sign;
          }
          rep.min_scaled = std::min(rep.min_scaled, zr.residual / t);
          rep.zeros.push_back(zr);
        }
        prev = s;
        prev_lambda = lambda;
      }
    }
  }
  rep.pass = rep.failed_evaluations == 0 && rep.sign_changes == 0 && rep.min_residual > opts.floor;
  return rep;
}

}  // namespace asymbif
