#include "asymbif/catalog.hpp"
#include "asymbif/detection.hpp"
#include "asymbif/errors.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace asymbif;
using asymbif::testing::pt_tanh;

namespace {

SpectralSplit synthetic_split(const std::vector<double>& mu, double upper, double d) {
  return spectral_split(build_synthetic(mu, EssentialSpectrum::half_line(upper)), d);
}

Nonlinearity constant_h(double h) {
  Nonlinearity nl = catalog::rational(h);
  nl.h_plus = [h](double) { return h; };
  nl.h_minus = [h](double) { return h; };
  return nl;
}

Matrix sech_kernel(const Mesh& mesh) {
  Vector v = mesh.nodes.unaryExpr([](double x) { return 1.0 / std::cosh(x); });
  return v / mesh.norm(v);
}

}  // namespace

TEST(Degree, SimpleZeroEigenvalue) {
  const auto split = synthetic_split({-1, 0, 2}, 3, 0.5);
  const auto plus = degree_at(split, 0.25), minus = degree_at(split, -0.25);
  EXPECT_EQ(plus.negative_count, 1);
  EXPECT_EQ(plus.degree, -1);
  EXPECT_EQ(minus.negative_count, 0);
  EXPECT_EQ(minus.degree, 1);
}

TEST(Degree, DoubleZeroEigenvalueDoesNotJump) {
  const auto split = synthetic_split({-1, 0, 0, 2}, 2, 0.5);
  EXPECT_EQ(degree_at(split, 0.25).degree, 1);
  EXPECT_EQ(degree_at(split, -0.25).degree, 1);
}

TEST(Degree, OnZEigenvalueIsDegenerate) {
  const auto split = synthetic_split({-1, 0, 2}, 3, 0.5);
  try {
    degree_at(split, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_linearization);
  }
}

TEST(Witness, SimpleAndDoubleKernels) {
  const auto simple = parity_and_morse(synthetic_split({-1, 0, 2}, 3, 0.5), 0.25);
  EXPECT_TRUE(simple.parity_jump);
  EXPECT_EQ(simple.verdict, WitnessVerdict::bifurcation_certified);

  auto dbl = parity_and_morse(synthetic_split({-1, 0, 0, 2}, 3, 0.5), 0.25);
  EXPECT_FALSE(dbl.parity_jump);
  EXPECT_EQ(dbl.morse_m, dbl.morse_n + 2);
  EXPECT_TRUE(dbl.critical_groups_differ);
  // no sign check attached yet
  EXPECT_EQ(dbl.verdict, WitnessVerdict::no_witness);

  IntegralCheck pass;
  pass.status = CheckStatus::pass;
  attach_sign_checks(dbl, pass, IntegralCheck{});
  EXPECT_EQ(dbl.verdict, WitnessVerdict::even_multiplicity_certified);
}

TEST(Witness, DegreeParityAndMorseBookkeepingOnRandomSpectra) {
  std::mt19937_64 rng(2024);
  std::uniform_int_distribution<int> kdim(1, 4), others(1, 6);
  std::uniform_real_distribution<double> in_band(-0.1, 0.1), out_band(1.0, 4.0), coin(0, 1);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> mu;
    const int k = kdim(rng);
    for (int i = 0; i < k; ++i) mu.push_back(trial % 2 ? 0.0 : in_band(rng));
    const int o = others(rng);
    for (int i = 0; i < o; ++i) mu.push_back((coin(rng) < 0.5 ? -1 : 1) * out_band(rng));
    const auto split = spectral_split(build_synthetic(mu, EssentialSpectrum::half_line(5)), 0.5);
    const double delta = 0.2 + 0.1 * coin(rng);
    const auto w = parity_and_morse(split, delta);
    const int sign = w.kernel_dim % 2 ? -1 : 1;
    EXPECT_EQ(w.degree_plus.degree * w.degree_minus.degree, sign);
    EXPECT_EQ(w.morse_m - w.morse_n, w.kernel_dim);
    EXPECT_EQ(w.kernel_dim, k);
  }
}

TEST(LandesmanLazer, TanhOnSechKernelIsOneNorm) {
  const auto& pt = pt_tanh();
  const Matrix kernel = kernel_basis(pt.split, pt.ctx.delta);
  const Vector z = kernel.col(0);
  // g+ = 1, g- = -1: the integrand is |z|
  const double I = landesman_lazer_integral(catalog::tanh(1.0), pt.op.mesh, z);
  EXPECT_NEAR(I, pt.op.mesh.one_norm(z), 1e-10);
  const auto check = landesman_lazer_f5(catalog::tanh(1.0), pt.op.mesh, kernel, 64);
  EXPECT_EQ(check.status, CheckStatus::pass);
  EXPECT_NEAR(check.min_integral, pt.op.mesh.one_norm(z), 1e-10);
}

TEST(LandesmanLazer, VanishingLimitsFail) {
  const auto& pt = pt_tanh();
  const Matrix kernel = kernel_basis(pt.split, pt.ctx.delta);
  auto nl = catalog::gauss_odd(0.5);
  nl.sign_mode = SignMode::f5_nonneg;
  EXPECT_EQ(landesman_lazer_f5(nl, pt.op.mesh, kernel, 64).status, CheckStatus::fail);
}

TEST(LandesmanLazer, SignFlippedPassesInNonpositiveMode) {
  const auto& pt = pt_tanh();
  const Matrix kernel = kernel_basis(pt.split, pt.ctx.delta);
  const auto nl = catalog::tanh(-0.5);
  EXPECT_EQ(nl.sign_mode, SignMode::f5_nonpos);
  const auto check = landesman_lazer_f5(nl, pt.op.mesh, kernel, 64);
  EXPECT_EQ(check.status, CheckStatus::pass);
  EXPECT_LT(check.max_integral, 0.0);
}

TEST(LandesmanLazer, ScalingDoesNotChangeVerdict) {
  const auto& pt = pt_tanh();
  const Matrix kernel = kernel_basis(pt.split, pt.ctx.delta);
  for (const auto& name : {"tanh", "atan"}) {
    const auto base = landesman_lazer_f5(catalog::make(name, {{"eps", 0.4}}), pt.op.mesh, kernel, 64);
    for (double c : {0.01, 3.0, 250.0}) {
      EXPECT_EQ(landesman_lazer_f5(catalog::make(name, {{"eps", 0.4 * c}}), pt.op.mesh, kernel, 64).status, base.status);
    }
  }
  const auto dk = spectral_split(
      build_synthetic_rotated({-2.6, -1.4, 0, 0, 1.3, 2.2}, EssentialSpectrum::half_line(2.2), 7), 0.5);
  const Matrix k2 = kernel_basis(dk, 0.4);
  Mesh unit;
  unit.nodes = Vector::LinSpaced(6, 0, 5);
  const auto base = landesman_lazer_f5(catalog::atan(0.5), unit, k2, default_sphere_samples(2), 7);
  EXPECT_EQ(base.status, CheckStatus::pass);
  EXPECT_EQ(landesman_lazer_f5(catalog::atan(40.0), unit, k2, default_sphere_samples(2), 7).status, base.status);
}

TEST(SignConditionF6, Examples) {
  const Mesh mesh = pt_tanh().op.mesh;
  const Matrix kernel = sech_kernel(mesh);
  EXPECT_EQ(sign_condition_f6(constant_h(1.0), mesh, kernel, 64).status, CheckStatus::pass);
  EXPECT_EQ(sign_condition_f6(catalog::rational_sq(0.5), mesh, kernel, 64).status, CheckStatus::fail);
  const auto r = sign_condition_f6(catalog::rational(0.5), mesh, kernel, 64);
  EXPECT_EQ(r.status, CheckStatus::pass);
  EXPECT_GT(r.min_integral, 0.0);
  // h+- = kappa on the whole line: the integral is kappa times the measure of {z != 0}
  EXPECT_NEAR(f6_integral(catalog::rational(0.5), mesh, kernel.col(0)), 0.5 * mesh.weight * mesh.size(), 1e-10);
}

TEST(SphereSamples, UnitDeterministicAndCovering) {
  const auto one = kernel_sphere_samples(1, 10, 3);
  ASSERT_EQ(one.size(), 2u);
  EXPECT_EQ(one[0](0), 1.0);
  EXPECT_EQ(one[1](0), -1.0);
  for (int dim : {2, 3, 5}) {
    const int n = default_sphere_samples(dim);
    EXPECT_EQ(n, 2 * dim * dim + 64);
    const auto a = kernel_sphere_samples(dim, n, 9), b = kernel_sphere_samples(dim, n, 9);
    ASSERT_EQ(a.size(), static_cast<std::size_t>(n));
    Vector mean = Vector::Zero(dim);
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_NEAR(a[i].norm(), 1.0, 1e-12);
      EXPECT_EQ(a[i], b[i]);
      mean += a[i];
    }
    EXPECT_LT(mean.norm() / n, 0.2) << dim;
  }
}
