#pragma once

#include "asymbif/operator.hpp"

#include <array>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace asymbif {

using PointFn = std::function<double(double x, double s)>;
using LimitFn = std::function<double(double x)>;

enum class SignMode { none, f5_nonneg, f5_nonpos, f6_nonneg, f6_nonpos };

const char* to_string(SignMode mode);

struct Nonlinearity {
  std::string name;
  PointFn g;
  PointFn dg;  // optional; central differences otherwise
  PointFn G;   // optional primitive with G(x, 0) = 0; quadrature otherwise
  std::optional<double> lip_declared;
  std::optional<double> sup_declared;
  LimitFn g_plus, g_minus;  // (f5) limits of g as s -> +-inf
  LimitFn h_plus, h_minus;  // (f6) limits of g*s as s -> +-inf
  SignMode sign_mode = SignMode::none;

  double derivative(double x, double s) const;
  double primitive(double x, double s) const;
};

Vector eval_nemytskii(const Nonlinearity& nl, const Mesh& mesh, const Vector& u);
// Diagonal of N'(u).
Vector eval_nemytskii_derivative(const Nonlinearity& nl, const Mesh& mesh, const Vector& u);
double eval_psi(const Nonlinearity& nl, const Mesh& mesh, const Vector& u);

// Adaptive Gauss-Kronrod primitive of g(x, .) from 0 to s, absolute tolerance 1e-10.
double numeric_primitive(const PointFn& g, double x, double s);

struct LipschitzEstimate {
  double value = 0.0;
  bool estimated = false;
};

// Declared value if present; otherwise max |dg/ds| by central differences over
// mesh nodes (subsampled to at most 65) and `samples` uniform s-values in s_range.
LipschitzEstimate lipschitz_constant(const Nonlinearity& nl, const Mesh& mesh, double s_min, double s_max,
                                     int samples);

// ||N(t u)|| / t for each t.
std::vector<double> hadamard_ratio_diagnostic(const Nonlinearity& nl, const Mesh& mesh, const Vector& u,
                                              const std::vector<double>& ts);

enum class Flag { satisfied, violated, not_applicable };

const char* to_string(Flag flag);

struct FlagResult {
  Flag flag = Flag::not_applicable;
  std::string witness;
};

struct DistCondition {
  bool pass = false;
  double lip = 0.0;
  double dist = 0.0;
  double margin = 1e-6;
};

struct HypothesisReport {
  std::array<FlagResult, 6> f;  // f[0] is (f1)
  double lip_estimate = 0.0;
  bool lip_is_estimate = false;
  DistCondition dist_condition;
};

HypothesisReport hypothesis_report(const Nonlinearity& nl, const Operator& op, double lambda0);

// The documented s-sample set used by the hypothesis checks.
std::vector<double> hypothesis_s_samples();
// Up to `count` mesh nodes, evenly spaced through the mesh.
std::vector<double> sample_nodes(const Mesh& mesh, int count);

}  // namespace asymbif
