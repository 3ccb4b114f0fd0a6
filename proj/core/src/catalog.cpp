#include "asymbif/catalog.hpp"

#include "asymbif/errors.hpp"

#include <cmath>
#include <numbers>

namespace asymbif::catalog {

namespace {

LimitFn constant_fn(double c) {
  return [c](double) { return c; };
}

double log_cosh(double s) {
  const double a = std::abs(s);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

SignMode f5_mode(double c) {
  if (c > 0.0) return SignMode::f5_nonneg;
  if (c < 0.0) return SignMode::f5_nonpos;
  return SignMode::none;
}

SignMode f6_mode(double c) {
  if (c > 0.0) return SignMode::f6_nonneg;
  if (c < 0.0) return SignMode::f6_nonpos;
  return SignMode::none;
}

void require_finite(const std::string& name, double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::invalid_spec, "nonlinearity '" + name + "' parameter must be finite");
}

}  // namespace

Nonlinearity zero() {
  Nonlinearity nl;
  nl.name = "zero";
  nl.g = [](double, double) { return 0.0; };
  nl.dg = [](double, double) { return 0.0; };
  nl.G = [](double, double) { return 0.0; };
  nl.lip_declared = 0.0;
  nl.sup_declared = 0.0;
  return nl;
}

Nonlinearity linear(double eps) {
  require_finite("linear", eps);
  Nonlinearity nl;
  nl.name = "linear";
  nl.g = [eps](double, double s) { return eps * s; };
  nl.dg = [eps](double, double) { return eps; };
  nl.G = [eps](double, double s) { return 0.5 * eps * s * s; };
  nl.lip_declared = std::abs(eps);
  return nl;
}

Nonlinearity tanh(double eps) {
  require_finite("tanh", eps);
  Nonlinearity nl;
  nl.name = "tanh";
  nl.g = [eps](double, double s) { return eps * std::tanh(s); };
  nl.dg = [eps](double, double s) {
    const double c = std::cosh(s);
    return std::isfinite(c) ? eps / (c * c) : 0.0;
  };
  nl.G = [eps](double, double s) { return eps * log_cosh(s); };
  nl.lip_declared = std::abs(eps);
  nl.sup_declared = std::abs(eps);
  nl.g_plus = constant_fn(eps);
  nl.g_minus = constant_fn(-eps);
  nl.sign_mode = f5_mode(eps);
  return nl;
}

Nonlinearity atan(double eps) {
  require_finite("atan", eps);
  Nonlinearity nl;
  nl.name = "atan";
  nl.g = [eps](double, double s) { return eps * std::atan(s); };
  nl.dg = [eps](double, double s) { return eps / (1.0 + s * s); };
  nl.G = [eps](double, double s) { return eps * (s * std::atan(s) - 0.5 * std::log1p(s * s)); };
  nl.lip_declared = std::abs(eps);
  nl.sup_declared = std::abs(eps) * std::numbers::pi / 2.0;
  nl.g_plus = constant_fn(eps * std::numbers::pi / 2.0);
  nl.g_minus = constant_fn(-eps * std::numbers::pi / 2.0);
  nl.sign_mode = f5_mode(eps);
  return nl;
}

Nonlinearity gauss_odd(double kappa) {
  require_finite("gauss_odd", kappa);
  Nonlinearity nl;
  nl.name = "gauss_odd";
  nl.g = [kappa](double, double s) { return -kappa * s * std::exp(-0.5 * s * s); };
  nl.dg = [kappa](double, double s) { return -kappa * (1.0 - s * s) * std::exp(-0.5 * s * s); };
  nl.G = [kappa](double, double s) { return kappa * std::expm1(-0.5 * s * s); };
  nl.lip_declared = std::abs(kappa);
  nl.sup_declared = std::abs(kappa) * std::exp(-0.5);
  nl.g_plus = constant_fn(0.0);
  nl.g_minus = constant_fn(0.0);
  return nl;
}

Nonlinearity rational(double kappa) {
  require_finite("rational", kappa);
  Nonlinearity nl;
  nl.name = "rational";
  nl.g = [kappa](double, double s) { return kappa * s / (1.0 + s * s); };
  nl.dg = [kappa](double, double s) {
    const double q = 1.0 + s * s;
    return kappa * (1.0 - s * s) / (q * q);
  };
  nl.G = [kappa](double, double s) { return 0.5 * kappa * std::log1p(s * s); };
  nl.lip_declared = std::abs(kappa);
  nl.sup_declared = 0.5 * std::abs(kappa);
  nl.h_plus = constant_fn(kappa);
  nl.h_minus = constant_fn(kappa);
  nl.sign_mode = f6_mode(kappa);
  return nl;
}

Nonlinearity rational_sq(double kappa) {
  require_finite("rational_sq", kappa);
  Nonlinearity nl;
  nl.name = "rational_sq";
  nl.g = [kappa](double, double s) {
    const double q = 1.0 + s * s;
    return kappa * s / (q * q);
  };
  nl.dg = [kappa](double, double s) {
    const double q = 1.0 + s * s;
    return kappa * (1.0 - 3.0 * s * s) / (q * q * q);
  };
  nl.G = [kappa](double, double s) { return 0.5 * kappa * s * s / (1.0 + s * s); };
  nl.lip_declared = std::abs(kappa);
  // max of s/(1+s^2)^2 at s = 1/sqrt(3)
  nl.sup_declared = std::abs(kappa) * 9.0 / (16.0 * std::sqrt(3.0));
  nl.h_plus = constant_fn(0.0);
  nl.h_minus = constant_fn(0.0);
  nl.sign_mode = f6_mode(kappa);
  return nl;
}

Nonlinearity clipped_inverse(double kappa) {
  require_finite("clipped_inverse", kappa);
  Nonlinearity nl;
  nl.name = "clipped_inverse";
  nl.g = [kappa](double, double s) { return std::abs(s) <= 1.0 ? kappa * s : kappa / s; };
  nl.dg = [kappa](double, double s) { return std::abs(s) <= 1.0 ? kappa : -kappa / (s * s); };
  nl.G = [kappa](double, double s) {
    const double a = std::abs(s);
    return a <= 1.0 ? 0.5 * kappa * s * s : kappa * (0.5 + std::log(a));
  };
  nl.lip_declared = std::abs(kappa);
  nl.sup_declared = std::abs(kappa);
  nl.g_plus = constant_fn(0.0);
  nl.g_minus = constant_fn(0.0);
  nl.h_plus = constant_fn(kappa);
  nl.h_minus = constant_fn(kappa);
  nl.sign_mode = f6_mode(kappa);
  return nl;
}

std::vector<std::string> names() {
  return {"zero", "linear", "tanh", "atan", "gauss_odd", "rational", "rational_sq", "clipped_inverse"};
}

Nonlinearity make(const std::string& name, const Params& params) {
  auto only = [&](const char* key) -> double {
    for (const auto& [k, v] : params) {
      if (k != key) throw Error(ErrorKind::invalid_spec, "nonlinearity '" + name + "' has no parameter '" + k + "'");
    }
    auto it = params.find(key);
    if (it == params.end()) {
      throw Error(ErrorKind::invalid_spec, "nonlinearity '" + name + "' needs parameter '" + key + "'");
    }
    return it->second;
  };
  if (name == "zero") {
    for (const auto& [k, v] : params) {
      throw Error(ErrorKind::invalid_spec, "nonlinearity 'zero' has no parameter '" + k + "'");
    }
    return zero();
  }
  if (name == "linear") return linear(only("eps"));
  if (name == "tanh") return tanh(only("eps"));
  if (name == "atan") return atan(only("eps"));
  if (name == "gauss_odd") return gauss_odd(only("kappa"));
  if (name == "rational") return rational(only("kappa"));
  if (name == "rational_sq") return rational_sq(only("kappa"));
  if (name == "clipped_inverse") return clipped_inverse(only("kappa"));
  std::string known;
  for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::invalid_spec, "unknown nonlinearity '" + name + "' (known: " + known + ")");
}

Nonlinearity without_primitive(Nonlinearity nl) {
  nl.G = nullptr;
  return nl;
}

Nonlinearity without_derivative(Nonlinearity nl) {
  nl.dg = nullptr;
  return nl;
}

}  // namespace asymbif::catalog
