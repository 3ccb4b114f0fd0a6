#pragma once

#include "asymbif/nonlinearity.hpp"
#include "asymbif/operator.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace asymbif {

struct DegreeReport {
  double lambda = 0.0;
  int negative_count = 0;
  int degree = 1;
  std::string valid_radius_note;
};

// Degree of L_lambda on Z: (-1)^#{mu_i - lambda < 0}.
DegreeReport degree_at(const SpectralSplit& split, double lambda);

enum class CheckStatus { pass, fail, not_applicable };

const char* to_string(CheckStatus s);

struct IntegralCheck {
  CheckStatus status = CheckStatus::not_applicable;
  double min_integral = 0.0;
  double max_integral = 0.0;
  int samples = 0;
  std::string note;
};

enum class WitnessVerdict { bifurcation_certified, even_multiplicity_certified, no_witness };

const char* to_string(WitnessVerdict v);

struct WitnessReport {
  int kernel_dim = 0;
  bool parity_jump = false;
  int morse_m = 0;  // at lambda = +delta
  int morse_n = 0;  // at lambda = -delta
  bool critical_groups_differ = false;
  DegreeReport degree_plus, degree_minus;
  IntegralCheck ll_f5, ll_f6;
  WitnessVerdict verdict = WitnessVerdict::no_witness;
};

WitnessReport parity_and_morse(const SpectralSplit& split, double delta);

// Attach the sign checks and recompute the verdict.
void attach_sign_checks(WitnessReport& report, const IntegralCheck& f5, const IntegralCheck& f6);

// Z-basis columns whose eigenvalue satisfies |mu| < delta.
Matrix kernel_basis(const SpectralSplit& split, double delta);

// Unit vectors in R^dim: +-1 for dim 1, a rotated circle for dim 2, a
// Fibonacci sphere for dim 3, normalized Gaussianized Halton points beyond.
std::vector<Vector> kernel_sphere_samples(int dim, int count, std::uint64_t seed);
int default_sphere_samples(int dim);

// int_{z>0} g+ z + int_{z<0} g- z
double landesman_lazer_integral(const Nonlinearity& nl, const Mesh& mesh, const Vector& z);
// int_{z>0} h+ + int_{z<0} h-
double f6_integral(const Nonlinearity& nl, const Mesh& mesh, const Vector& z);

IntegralCheck landesman_lazer_f5(const Nonlinearity& nl, const Mesh& mesh, const Matrix& kernel,
                                 int sphere_samples, std::uint64_t seed = 0);
IntegralCheck sign_condition_f6(const Nonlinearity& nl, const Mesh& mesh, const Matrix& kernel,
                                int sphere_samples, std::uint64_t seed = 0);

}  // namespace asymbif
