#pragma once

#include "asymbif/nonlinearity.hpp"
#include "asymbif/operator.hpp"

#include <optional>

namespace asymbif {

struct ReductionContext {
  SpectralSplit split;
  double delta = 0.0;
  double R = 0.0;
  double beta = 0.0;
  double k = 0.0;
  double c_lip = 0.0;    // k / (1 - k), plain-norm bound on w(lambda, .)
  double c_graph = 0.0;  // beta / (1 - k)
  double safety = 0.5;
  double tol_scale = 1e-11;  // tol_w = tol_scale * (1 + ||z||)
  int max_iterations = 0;
  // Without a contraction certificate the W-equation is solved by Newton and
  // the rate/iteration assertions do not apply.
  bool certified = true;

  double tol_w(double z_norm) const { return tol_scale * (1.0 + z_norm); }
};

ReductionContext configure(const SpectralSplit& split, double beta, double safety);

// Used when beta * W_inverse_bound >= 1: delta = safety * min(d_gap, nonzero_gap), k unset.
ReductionContext configure_uncertified(const SpectralSplit& split, double beta, double safety);

int default_max_iterations(double k);

struct ReducedPoint {
  double lambda = 0.0;
  Vector z;  // Z coordinates
  Vector w;  // full grid vector in W
  double fixed_point_residual = 0.0;
  int iterations = 0;
  double max_rate = 0.0;  // largest observed d_{m+1} / d_m
  double first_step = 0.0;  // ||w_1 - w_0||
  double orthogonality_defect = 0.0;
};

// z holds coordinates in split.z_basis. w0 is an optional warm start in W.
ReducedPoint solve_w(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                     const Vector& z, const Vector* w0 = nullptr);

// || L w - lambda w - P N(w + z) ||
double w_equation_residual(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                           const ReducedPoint& p);

struct ReducedEvaluation {
  ReducedPoint point;
  Vector gradient;  // F_lambda(z) in Z coordinates
  double value = 0.0;  // phi_lambda(z)
};

ReducedEvaluation evaluate_reduced(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl,
                                   double lambda, const Vector& z, const Vector* w0 = nullptr);

Vector reduced_map(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                   const Vector& z);

double reduced_value(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                     const Vector& z);

// ||w(lambda, z) - w(lambda, z')|| / ||z - z'||
double lipschitz_probe(const ReductionContext& ctx, const Operator& op, const Nonlinearity& nl, double lambda,
                       const Vector& z, const Vector& z_prime);

// Phi_lambda(u) = 1/2 <(L - lambda) u, u> - psi(u)
double full_functional(const Operator& op, const Nonlinearity& nl, double lambda, const Vector& u);

}  // namespace asymbif
