#pragma once

#include "asymbif/nonlinearity.hpp"

#include <map>
#include <string>
#include <vector>

namespace asymbif::catalog {

Nonlinearity zero();
Nonlinearity linear(double eps);
Nonlinearity tanh(double eps);
Nonlinearity atan(double eps);
// -kappa * s * exp(-s^2/2); g(+-inf) = 0, Lip = |kappa|.
Nonlinearity gauss_odd(double kappa);
// kappa * s / (1 + s^2); h+- = kappa.
Nonlinearity rational(double kappa);
// kappa * s / (1 + s^2)^2; h+- = 0.
Nonlinearity rational_sq(double kappa);
// kappa * s * min(1, 1/s^2); h+- = kappa.
Nonlinearity clipped_inverse(double kappa);

using Params = std::map<std::string, double>;

Nonlinearity make(const std::string& name, const Params& params);
std::vector<std::string> names();

// Same g with the closed-form primitive removed, forcing quadrature.
Nonlinearity without_primitive(Nonlinearity nl);
// Same g with the declared derivative removed, forcing central differences.
Nonlinearity without_derivative(Nonlinearity nl);

}  // namespace asymbif::catalog
