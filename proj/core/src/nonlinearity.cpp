#include "asymbif/nonlinearity.hpp"

#include "asymbif/errors.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace asymbif {

namespace {

std::string num(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double central_difference(const PointFn& g, double x, double s) {
  const double step = 1e-6 * (1.0 + std::abs(s));
  return (g(x, s + step) - g(x, s - step)) / (2.0 * step);
}

constexpr double kFar = 1e12;

}  // namespace

const char* to_string(SignMode mode) {
  switch (mode) {
    case SignMode::none: return "none";
    case SignMode::f5_nonneg: return "f5_nonneg";
    case SignMode::f5_nonpos: return "f5_nonpos";
    case SignMode::f6_nonneg: return "f6_nonneg";
    case SignMode::f6_nonpos: return "f6_nonpos";
  }
  return "none";
}

const char* to_string(Flag flag) {
  switch (flag) {
    case Flag::satisfied: return "satisfied";
    case Flag::violated: return "violated";
    case Flag::not_applicable: return "not-applicable";
  }
  return "not-applicable";
}

double Nonlinearity::derivative(double x, double s) const {
  return dg ? dg(x, s) : central_difference(g, x, s);
}

double Nonlinearity::primitive(double x, double s) const {
  return G ? G(x, s) : numeric_primitive(g, x, s);
}

double numeric_primitive(const PointFn& g, double x, double s) {
  if (s == 0.0) return 0.0;
  using boost::math::quadrature::gauss_kronrod;
  // Panels of unit length keep the relative tolerance meaningful as an absolute one.
  const double len = std::abs(s);
  const int panels = std::max(1, static_cast<int>(std::ceil(len)));
  const double dir = s > 0.0 ? 1.0 : -1.0;
  const double step = len / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = dir * p * step;
    const double b = dir * (p + 1) * step;
    total += gauss_kronrod<double, 31>::integrate([&](double t) { return g(x, t); }, a, b, 15, 1e-12);
  }
  return total;
}

Vector eval_nemytskii(const Nonlinearity& nl, const Mesh& mesh, const Vector& u) {
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double v = nl.g(mesh.nodes(i), u(i));
    if (!std::isfinite(v)) throw EvaluationError(static_cast<std::size_t>(i), mesh.nodes(i), u(i));
    out(i) = v;
  }
  return out;
}

Vector eval_nemytskii_derivative(const Nonlinearity& nl, const Mesh& mesh, const Vector& u) {
  Vector out(u.size());
  for (Index i = 0; i < u.size(); ++i) {
    const double v = nl.derivative(mesh.nodes(i), u(i));
    if (!std::isfinite(v)) throw EvaluationError(static_cast<std::size_t>(i), mesh.nodes(i), u(i));
    out(i) = v;
  }
  return out;
}

double eval_psi(const Nonlinearity& nl, const Mesh& mesh, const Vector& u) {
  double sum = 0.0;
  for (Index i = 0; i < u.size(); ++i) {
    const double v = nl.primitive(mesh.nodes(i), u(i));
    if (!std::isfinite(v)) throw EvaluationError(static_cast<std::size_t>(i), mesh.nodes(i), u(i));
    sum += v;
  }
  return mesh.weight * sum;
}

std::vector<double> sample_nodes(const Mesh& mesh, int count) {
  const Index n = mesh.size();
  std::vector<double> xs;
  if (n == 0) return xs;
  if (n <= count) {
    for (Index i = 0; i < n; ++i) xs.push_back(mesh.nodes(i));
    return xs;
  }
  for (int k = 0; k < count; ++k) {
    const Index i = static_cast<Index>(std::llround(static_cast<double>(k) * (n - 1) / (count - 1)));
    xs.push_back(mesh.nodes(i));
  }
  return xs;
}

LipschitzEstimate lipschitz_constant(const Nonlinearity& nl, const Mesh& mesh, double s_min, double s_max,
                                     int samples) {
  if (nl.lip_declared) return {*nl.lip_declared, false};
  if (samples < 1000) throw Error(ErrorKind::invalid_spec, "Lipschitz scan needs at least 1000 samples");
  const auto xs = sample_nodes(mesh, 65);
  double best = 0.0;
  for (double x : xs) {
    for (int j = 0; j < samples; ++j) {
      const double s = s_min + (s_max - s_min) * j / (samples - 1);
      const double d = std::abs(central_difference(nl.g, x, s));
      if (std::isfinite(d)) best = std::max(best, d);
    }
  }
  return {best, true};
}

std::vector<double> hadamard_ratio_diagnostic(const Nonlinearity& nl, const Mesh& mesh, const Vector& u,
                                              const std::vector<double>& ts) {
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) out.push_back(mesh.norm(eval_nemytskii(nl, mesh, t * u)) / t);
  return out;
}

std::vector<double> hypothesis_s_samples() {
  std::vector<double> s{0.0};
  for (int k = -6; k <= 16; ++k) {
    const double v = std::pow(10.0, 0.5 * k);
    s.push_back(v);
    s.push_back(-v);
  }
  for (int j = 0; j <= 200; ++j) s.push_back(-10.0 + 0.1 * j);
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

namespace {

FlagResult check_f1(const Nonlinearity& nl, const std::vector<double>& xs, const std::vector<double>& ss,
                    double lip) {
  double alpha = 0.0, beta = 0.0;
  for (double x : xs) {
    const double g0 = nl.g(x, 0.0);
    if (!std::isfinite(g0)) return {Flag::violated, "g(x,0) not finite at x=" + num(x)};
    alpha = std::max(alpha, std::abs(g0));
    for (double s : ss) {
      const double v = nl.g(x, s);
      if (!std::isfinite(v)) return {Flag::violated, "g not finite at x=" + num(x) + ", s=" + num(s)};
      if (s != 0.0) beta = std::max(beta, (std::abs(v) - std::abs(g0)) / std::abs(s));
    }
  }
  const std::string w = "alpha=" + num(alpha) + ", beta=" + num(beta);
  if (beta <= lip * (1.0 + 1e-6) + 1e-9) return {Flag::satisfied, w};
  return {Flag::violated, w + " exceeds Lip(g)=" + num(lip)};
}

FlagResult check_f3(const Nonlinearity& nl, const Operator& op, double lambda0) {
  if (op.eigenvalues.size() == 0) return {Flag::not_applicable, "no eigen-data"};
  Index best = 0;
  for (Index i = 1; i < op.eigenvalues.size(); ++i) {
    if (std::abs(op.eigenvalues(i) - lambda0) < std::abs(op.eigenvalues(best) - lambda0)) best = i;
  }
  Vector u = op.eigenvectors.col(best);
  u /= op.mesh.norm(u);
  const auto r = hadamard_ratio_diagnostic(nl, op.mesh, u, {10.0, 1e2, 1e3, 1e4});
  std::string w = "||N(tu)||/t at t=1e1..1e4: ";
  for (std::size_t i = 0; i < r.size(); ++i) w += (i ? ", " : "") + num(r[i]);
  if (r.back() <= 1e-2 * r.front() + 1e-14) return {Flag::satisfied, w};
  return {Flag::violated, w + " (non-vanishing)"};
}

FlagResult check_f4(const Nonlinearity& nl, const std::vector<double>& xs, const std::vector<double>& ss) {
  double near = 0.0, far = 0.0;
  for (double x : xs) {
    for (double s : ss) {
      const double v = std::abs(nl.g(x, s));
      if (!std::isfinite(v)) return {Flag::violated, "g not finite at x=" + num(x) + ", s=" + num(s)};
      if (std::abs(s) <= 1e3) {
        near = std::max(near, v);
      } else {
        far = std::max(far, v);
      }
    }
  }
  const double sup = std::max(near, far);
  if (far > 2.0 * near + 1e-12) return {Flag::violated, "|g| grows: " + num(near) + " -> " + num(far)};
  if (nl.sup_declared && sup > *nl.sup_declared * (1.0 + 1e-9) + 1e-15) {
    return {Flag::violated, "sampled sup|g|=" + num(sup) + " exceeds declared " + num(*nl.sup_declared)};
  }
  return {Flag::satisfied, "sup|g|=" + num(sup)};
}

FlagResult check_f5(const Nonlinearity& nl, const std::vector<double>& xs) {
  if (!nl.g_plus || !nl.g_minus) return {Flag::not_applicable, "g+- not declared"};
  bool nonneg = true, nonpos = true, plus_nonzero = false, minus_nonzero = false;
  for (double x : xs) {
    const double gp = nl.g_plus(x), gm = nl.g_minus(x);
    if (std::abs(nl.g(x, kFar) - gp) > 1e-6 * (1.0 + std::abs(gp)) ||
        std::abs(nl.g(x, -kFar) - gm) > 1e-6 * (1.0 + std::abs(gm))) {
      return {Flag::violated, "declared g+- disagree with g at |s|=1e12, x=" + num(x)};
    }
    nonneg = nonneg && gp >= 0.0 && gm <= 0.0;
    nonpos = nonpos && gp <= 0.0 && gm >= 0.0;
    plus_nonzero = plus_nonzero || gp != 0.0;
    minus_nonzero = minus_nonzero || gm != 0.0;
  }
  if (nl.sign_mode == SignMode::f5_nonneg && !nonneg) return {Flag::violated, "f5_nonneg: +-g+- >= 0 fails"};
  if (nl.sign_mode == SignMode::f5_nonpos && !nonpos) return {Flag::violated, "f5_nonpos: +-g+- <= 0 fails"};
  if (!nonneg && !nonpos) return {Flag::violated, "+-g+- changes sign"};
  if (!plus_nonzero || !minus_nonzero) return {Flag::violated, "g+ or g- vanishes identically"};
  return {Flag::satisfied, nonneg ? "+-g+- >= 0" : "+-g+- <= 0"};
}

FlagResult check_f6(const Nonlinearity& nl, const std::vector<double>& xs, const std::vector<double>& ss) {
  if (!nl.h_plus || !nl.h_minus) return {Flag::not_applicable, "h+- not declared"};
  bool nonneg = true, nonpos = true, plus_nonzero = false, minus_nonzero = false;
  for (double x : xs) {
    for (double s : ss) {
      const double gs = nl.g(x, s) * s;
      nonneg = nonneg && gs >= 0.0;
      nonpos = nonpos && gs <= 0.0;
    }
    const double hp = nl.h_plus(x), hm = nl.h_minus(x);
    if (std::abs(nl.g(x, kFar) * kFar - hp) > 1e-6 * (1.0 + std::abs(hp)) ||
        std::abs(nl.g(x, -kFar) * -kFar - hm) > 1e-6 * (1.0 + std::abs(hm))) {
      return {Flag::violated, "declared h+- disagree with g*s at |s|=1e12, x=" + num(x)};
    }
    nonneg = nonneg && hp >= 0.0 && hm >= 0.0;
    nonpos = nonpos && hp <= 0.0 && hm <= 0.0;
    plus_nonzero = plus_nonzero || hp != 0.0;
    minus_nonzero = minus_nonzero || hm != 0.0;
  }
  if (nl.sign_mode == SignMode::f6_nonneg && !nonneg) return {Flag::violated, "f6_nonneg: g*s >= 0 fails"};
  if (nl.sign_mode == SignMode::f6_nonpos && !nonpos) return {Flag::violated, "f6_nonpos: g*s <= 0 fails"};
  if (!nonneg && !nonpos) return {Flag::violated, "g*s changes sign"};
  if (!plus_nonzero || !minus_nonzero) return {Flag::violated, "h+ or h- vanishes identically"};
  return {Flag::satisfied, nonneg ? "g*s >= 0, h+- >= 0" : "g*s <= 0, h+- <= 0"};
}

}  // namespace

HypothesisReport hypothesis_report(const Nonlinearity& nl, const Operator& op, double lambda0) {
  HypothesisReport rep;
  const auto xs = sample_nodes(op.mesh, 33);
  const auto ss = hypothesis_s_samples();

  const auto lip = lipschitz_constant(nl, op.mesh, -50.0, 50.0, 2001);
  rep.lip_estimate = lip.value;
  rep.lip_is_estimate = lip.estimated;

  rep.f[0] = check_f1(nl, xs, ss, lip.value);
  rep.f[1] = std::isfinite(lip.value)
                 ? FlagResult{Flag::satisfied, "Lip(g)=" + num(lip.value) + (lip.estimated ? " (estimated)" : " (declared)")}
                 : FlagResult{Flag::violated, "Lipschitz constant not finite"};
  rep.f[2] = check_f3(nl, op, lambda0);
  rep.f[3] = check_f4(nl, xs, ss);
  rep.f[4] = check_f5(nl, xs);
  rep.f[5] = check_f6(nl, xs, ss);

  auto& dc = rep.dist_condition;
  dc.lip = lip.value;
  dc.dist = op.sigma_e.distance(lambda0);
  dc.pass = dc.lip <= (1.0 - dc.margin) * dc.dist;
  return rep;
}

}  // namespace asymbif
