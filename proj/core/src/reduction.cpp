#include "asymbif/reduction.hpp"

#include "asymbif/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace asymbif {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_safety(double safety) {
  if (!(safety > 0.0 && safety < 1.0)) throw Error(ErrorKind::invalid_spec, "safety must lie in (0, 1)");
}

void check_admissible(const ReductionContext& ctx, double lambda, const Vector& z) {
  if (!std::isfinite(lambda) || std::abs(lambda) > ctx.delta * (1.0 + 1e-12)) {
    throw Error(ErrorKind::invalid_spec, "|lambda|=" + fmt(std::abs(lambda)) + " exceeds delta=" + fmt(ctx.delta));
  }
  if (z.size() != ctx.split.dim()) {
    throw Error(ErrorKind::invalid_spec, "z has " + std::to_string(z.size()) + " coordinates, dim Z is " +
                                             std::to_string(ctx.split.dim()));
  }
}

// M_lambda(u) = (L_lambda|_W)^{-1} P N(u)
Vector apply_m(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
               const Vector& u) {
  return inverse_on_w(ctx.split, op, lambda, eval_nemytskii(nl, op.mesh, u));
}

Vector banach_solve(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                    const Vector& zf, double tol, const Vector* w0, ReducedPoint& out) {
  Vector w = w0 ? *w0 : Vector::Zero(zf.size());
  const double z_norm = op.mesh.norm(zf);
  double prev = -1.0;
  for (int m = 1; m <= ctx.max_iterations; ++m) {
    Vector next = apply_m(ctx, op, nl, lambda, w + zf);
    const double d = op.mesh.norm(next - w);
    if (m == 1) out.first_step = d;
    // Rates are only meaningful above roundoff.
    const double floor = 1e-12 * (1.0 + z_norm + op.mesh.norm(next));
    if (prev > floor && d > floor) {
      const double rate = d / prev;
      out.max_rate = std::max(out.max_rate, rate);
      if (rate > ctx.k + 1e-8) {
        throw Error(ErrorKind::contraction_violated,
                    "observed rate " + fmt(rate) + " exceeds k=" + fmt(ctx.k) + " at iteration " + std::to_string(m));
      }
    }
    w = std::move(next);
    prev = d;
    out.iterations = m;
    if (ctx.c_lip * d <= tol) return w;
  }
  throw Error(ErrorKind::max_iterations,
              "no convergence in " + std::to_string(ctx.max_iterations) + " iterations (k=" + fmt(ctx.k) + ")");
}

// Newton on L_lambda w = P N(w + z) restricted to W; the Z-border keeps the
// correction in W.
Vector newton_solve(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                    const Vector& zf, double tol, const Vector* w0, ReducedPoint& out) {
  const auto& split = ctx.split;
  const Index n = op.size();
  const Index m = split.dim();
  const double excl = std::min(split.excluded_distance(lambda), split.d_gap);
  Vector w = w0 ? split.project_w(op.mesh, *w0) : Vector::Zero(n);

  auto residual = [&](const Vector& wv) {
    return Vector(op.apply(wv) - lambda * wv - split.project_w(op.mesh, eval_nemytskii(nl, op.mesh, wv + zf)));
  };

  Vector g = residual(w);
  double res = op.mesh.norm(g);
  for (int it = 1; it <= 60; ++it) {
    if (res / excl <= 0.1 * tol) {
      out.iterations = it - 1;
      return w;
    }
    Matrix j = Matrix::Zero(n + m, n + m);
    j.topLeftCorner(n, n) = op.matrix;
    j.topLeftCorner(n, n).diagonal() -= Vector::Constant(n, lambda) + eval_nemytskii_derivative(nl, op.mesh, w + zf);
    j.topRightCorner(n, m) = split.z_basis;
    j.bottomLeftCorner(m, n) = op.mesh.weight * split.z_basis.transpose();
    Vector rhs = Vector::Zero(n + m);
    rhs.head(n) = -g;
    Eigen::PartialPivLU<Matrix> lu(j);
    if (!(lu.rcond() > 1e-14)) throw Error(ErrorKind::singular_bordered_system, "W-equation Jacobian is singular");
    const Vector step = lu.solve(rhs).head(n);
    double t = 1.0;
    bool accepted = false;
    for (int h = 0; h <= 30; ++h, t *= 0.5) {
      Vector trial = w + t * step;
      Vector gt = residual(trial);
      const double rt = op.mesh.norm(gt);
      if (rt < res) {
        w = std::move(trial);
        g = std::move(gt);
        res = rt;
        accepted = true;
        break;
      }
    }
    out.iterations = it;
    if (!accepted) break;
  }
  if (res / excl <= tol) return w;
  throw Error(ErrorKind::no_convergence, "W-equation Newton stalled at residual " + fmt(res));
}

}  // namespace

int default_max_iterations(double k) {
  if (!(k > 0.0)) return 10;
  return 10 * static_cast<int>(std::ceil(-16.0 / std::log10(k)));
}

ReductionContext configure(const SpectralSplit& split, double beta, double safety) {
  check_safety(safety);
  if (!(std::isfinite(beta) && beta >= 0.0)) throw Error(ErrorKind::invalid_spec, "beta must be finite and >= 0");
  if (beta * split.w_inverse_bound >= 1.0) throw ContractionInfeasibleError(beta, split.w_inverse_bound);

  ReductionContext ctx;
  ctx.split = split;
  ctx.beta = beta;
  ctx.safety = safety;
  double reach = std::min(split.d_gap - beta, split.nonzero_gap);
  // Nothing outside the band and no sigma_e: any window works, take the band.
  if (!std::isfinite(reach)) reach = split.band;
  ctx.delta = safety * reach;
  ctx.k = std::isfinite(split.d_gap) ? beta / (split.d_gap - ctx.delta) : 0.0;
  if (!(ctx.k < 1.0)) throw ContractionInfeasibleError(beta, split.w_inverse_bound);
  ctx.c_lip = ctx.k / (1.0 - ctx.k);
  ctx.c_graph = beta / (1.0 - ctx.k);
  ctx.max_iterations = default_max_iterations(ctx.k);
  return ctx;
}

ReductionContext configure_uncertified(const SpectralSplit& split, double beta, double safety) {
  check_safety(safety);
  ReductionContext ctx;
  ctx.split = split;
  ctx.beta = beta;
  ctx.safety = safety;
  double reach = std::min(split.d_gap, split.nonzero_gap);
  if (!std::isfinite(reach)) reach = split.band;
  ctx.delta = safety * reach;
  ctx.k = std::isfinite(split.d_gap) ? beta / (split.d_gap - ctx.delta) : 0.0;
  ctx.c_lip = std::numeric_limits<double>::quiet_NaN();
  ctx.c_graph = std::numeric_limits<double>::quiet_NaN();
  ctx.max_iterations = 60;
  ctx.certified = false;
  return ctx;
}

ReducedPoint solve_w(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                     const Vector& z, const Vector* w0) {
  check_admissible(ctx, lambda, z);
  ReducedPoint p;
  p.lambda = lambda;
  p.z = z;
  const Vector zf = ctx.split.embed(z);
  const double tol = ctx.tol_w(op.mesh.norm(zf));
  p.w = ctx.certified ? banach_solve(ctx, op, nl, lambda, zf, tol, w0, p)
                      : newton_solve(ctx, op, nl, lambda, zf, tol, w0, p);

  p.fixed_point_residual = op.mesh.norm(apply_m(ctx, op, nl, lambda, p.w + zf) - p.w);
  p.orthogonality_defect = ctx.split.z_coordinates(op.mesh, p.w).lpNorm<Eigen::Infinity>();
  if (p.orthogonality_defect > 1e-10 * (1.0 + op.mesh.norm(p.w))) {
    throw Error(ErrorKind::contraction_violated, "w leaves W: defect " + fmt(p.orthogonality_defect));
  }
  return p;
}

double w_equation_residual(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                           const ReducedPoint& p) {
  const Vector zf = ctx.split.embed(p.z);
  const Vector pn = ctx.split.project_w(op.mesh, eval_nemytskii(nl, op.mesh, p.w + zf));
  return op.mesh.norm(op.apply(p.w) - p.lambda * p.w - pn);
}

double full_functional(const Operator& op, const Nonlinearity& nl, double lambda, const Vector& u) {
  const double quad = 0.5 * op.mesh.dot(op.apply(u) - lambda * u, u);
  return quad - eval_psi(nl, op.mesh, u);
}

ReducedEvaluation evaluate_reduced(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                                   double lambda, const Vector& z, const Vector* w0) {
  ReducedEvaluation ev;
  ev.point = solve_w(ctx, op, nl, lambda, z, w0);
  const Vector u = ev.point.w + ctx.split.embed(z);
  const Vector nu = eval_nemytskii(nl, op.mesh, u);
  ev.gradient = (ctx.split.z_eigenvalues.array() - lambda).matrix().cwiseProduct(z) -
                ctx.split.z_coordinates(op.mesh, nu);
  ev.value = full_functional(op, nl, lambda, u);
  return ev;
}

Vector reduced_map(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                   const Vector& z) {
  return evaluate_reduced(ctx, op, nl, lambda, z).gradient;
}

double reduced_value(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                     const Vector& z) {
  return evaluate_reduced(ctx, op, nl, lambda, z).value;
}

double lipschitz_probe(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                       const Vector& z, const Vector& z_prime) {
  const double dz = (z - z_prime).norm();
  if (dz == 0.0) throw Error(ErrorKind::degenerate_probe, "z and z' coincide");
  const auto a = solve_w(ctx, op, nl, lambda, z);
  const auto b = solve_w(ctx, op, nl, lambda, z_prime);
  return op.mesh.norm(a.w - b.w) / dz;
}

}  // namespace asymbif
