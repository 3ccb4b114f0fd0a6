#include "asymbif/catalog.hpp"
#include "asymbif/errors.hpp"
#include "asymbif/nonlinearity.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace asymbif;

namespace {

Mesh small_mesh() {
  Mesh m;
  m.nodes = Vector::LinSpaced(41, -4.0, 4.0);
  m.weight = 0.2;
  return m;
}

Vector sech_unit(const Mesh& mesh) {
  Vector v = mesh.nodes.unaryExpr([](double x) { return 1.0 / std::cosh(x); });
  return v / mesh.norm(v);
}

}  // namespace

TEST(Nemytskii, Examples) {
  const Mesh mesh = small_mesh();
  std::mt19937_64 rng(1);
  const Vector u = asymbif::testing::random_vector(rng, mesh.size());

  EXPECT_EQ(eval_nemytskii(catalog::zero(), mesh, u).norm(), 0.0);

  const Vector big = Vector::Constant(mesh.size(), 1000.0);
  EXPECT_LT((eval_nemytskii(catalog::tanh(1.0), mesh, big) - Vector::Ones(mesh.size())).cwiseAbs().maxCoeff(), 1e-12);

  EXPECT_LT((eval_nemytskii(catalog::linear(0.3), mesh, u) - 0.3 * u).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Psi, Examples) {
  const Mesh mesh = small_mesh();
  std::mt19937_64 rng(2);
  const Vector u = asymbif::testing::random_vector(rng, mesh.size());
  EXPECT_EQ(eval_psi(catalog::zero(), mesh, u), 0.0);
  EXPECT_NEAR(eval_psi(catalog::linear(0.3), mesh, u), 0.15 * mesh.dot(u, u), 1e-12);
}

TEST(Psi, QuadraturePrimitiveMatchesClosedForm) {
  for (const auto& name : catalog::names()) {
    const auto nl = asymbif::testing::catalog_sample(name);
    const auto quad = catalog::without_primitive(nl);
    for (double s : {-30.0, -2.5, -0.3, 0.0, 0.7, 4.0, 55.0}) {
      EXPECT_NEAR(quad.primitive(0.0, s), nl.G(0.0, s), 1e-10 * (1.0 + std::abs(s))) << name << " at " << s;
    }
  }
}

TEST(Psi, DirectionalDerivativeMatchesNemytskii) {
  const Mesh mesh = small_mesh();
  std::mt19937_64 rng(3);
  for (const auto& name : catalog::names()) {
    for (bool quad : {false, true}) {
      const auto nl = quad ? catalog::without_primitive(asymbif::testing::catalog_sample(name)) : asymbif::testing::catalog_sample(name);
      for (int trial = 0; trial < 5; ++trial) {
        const Vector u = 3.0 * asymbif::testing::random_vector(rng, mesh.size());
        const Vector v = asymbif::testing::random_vector(rng, mesh.size());
        const double eps = 1e-4;
        const double fd = eval_psi(nl, mesh, u + eps * v) - eval_psi(nl, mesh, u - eps * v);
        const Vector n = eval_nemytskii(nl, mesh, u);
        EXPECT_LE(std::abs(fd - 2 * eps * mesh.dot(n, v)),
                  1e-6 * eps * (1.0 + mesh.norm(v)) * (1.0 + mesh.norm(n)))
            << name << (quad ? " (quadrature)" : "");
      }
    }
  }
}

TEST(Lipschitz, Examples) {
  const Mesh mesh = small_mesh();
  EXPECT_DOUBLE_EQ(lipschitz_constant(catalog::tanh(0.5), mesh, -50, 50, 2001).value, 0.5);
  EXPECT_DOUBLE_EQ(lipschitz_constant(catalog::zero(), mesh, -50, 50, 2001).value, 0.0);

  auto tanh_est = catalog::without_derivative(catalog::tanh(0.5));
  tanh_est.lip_declared.reset();
  const auto e = lipschitz_constant(tanh_est, mesh, -50, 50, 2001);
  EXPECT_TRUE(e.estimated);
  EXPECT_NEAR(e.value, 0.5, 1e-6);
}

TEST(Lipschitz, GaussOddAgreesWithDenseScan) {
  const double kappa = 0.8;
  // independent oracle: 1e6-point scan of the closed-form |g'| = kappa |1 - s^2| e^{-s^2/2}
  double dense = 0.0;
  const int n = 1000000;
  for (int i = 0; i <= n; ++i) {
    const double s = -10.0 + 20.0 * i / n;
    dense = std::max(dense, kappa * std::abs(1.0 - s * s) * std::exp(-0.5 * s * s));
  }
  EXPECT_NEAR(dense, kappa, 1e-12);

  auto nl = catalog::without_derivative(catalog::gauss_odd(kappa));
  nl.lip_declared.reset();
  const auto est = lipschitz_constant(nl, small_mesh(), -50, 50, 2001);
  EXPECT_TRUE(est.estimated);
  EXPECT_NEAR(est.value, dense, 1e-6);
  EXPECT_DOUBLE_EQ(*catalog::gauss_odd(kappa).lip_declared, kappa);
}

TEST(Lipschitz, RejectsTooFewSamples) {
  auto nl = catalog::tanh(0.5);
  nl.lip_declared.reset();
  EXPECT_THROW(lipschitz_constant(nl, small_mesh(), -50, 50, 999), Error);
}

TEST(Hadamard, Examples) {
  const Mesh mesh = small_mesh();
  const Vector u = sech_unit(mesh);
  const std::vector<double> ts{10, 100, 1000, 10000};

  for (double r : hadamard_ratio_diagnostic(catalog::zero(), mesh, u, ts)) EXPECT_EQ(r, 0.0);

  const auto tanh_r = hadamard_ratio_diagnostic(catalog::tanh(1.0), mesh, u, ts);
  for (std::size_t i = 1; i < tanh_r.size(); ++i) EXPECT_LT(tanh_r[i], tanh_r[i - 1]);
  EXPECT_LT(tanh_r.back(), 1e-2);

  for (double r : hadamard_ratio_diagnostic(catalog::linear(0.3), mesh, u, ts)) EXPECT_NEAR(r, 0.3, 1e-12);
}

TEST(Hadamard, BoundedNonlinearityObeysSupBound) {
  const Mesh mesh = small_mesh();
  const double one_norm = mesh.norm(Vector::Ones(mesh.size()));
  const std::vector<double> ts{10, 100, 1000, 10000};
  std::mt19937_64 rng(4);
  for (const auto& name : catalog::names()) {
    const auto nl = asymbif::testing::catalog_sample(name);
    if (!nl.sup_declared) continue;
    for (int trial = 0; trial < 3; ++trial) {
      Vector u = asymbif::testing::random_vector(rng, mesh.size());
      u /= mesh.norm(u);
      const auto r = hadamard_ratio_diagnostic(nl, mesh, u, ts);
      for (std::size_t i = 0; i < ts.size(); ++i) EXPECT_LE(r[i], *nl.sup_declared * one_norm / ts[i] * (1 + 1e-12)) << name;
    }
  }
}

TEST(Hypotheses, PoschlTellerTanh) {
  const auto& s = asymbif::testing::pt_tanh();
  const auto rep = hypothesis_report(s.nl, s.op, 0.0);
  for (int i = 0; i < 5; ++i) EXPECT_EQ(rep.f[static_cast<std::size_t>(i)].flag, Flag::satisfied) << "f" << i + 1;
  EXPECT_TRUE(rep.dist_condition.pass);
  EXPECT_DOUBLE_EQ(rep.dist_condition.lip, 0.5);
  EXPECT_NEAR(rep.dist_condition.dist, 1.0, 1e-3);
}

TEST(Hypotheses, DistanceConditionFailsWhenLipExceedsGap) {
  const auto& s = asymbif::testing::pt_tanh();
  const auto rep = hypothesis_report(catalog::gauss_odd(1.2), s.op, 0.0);
  EXPECT_FALSE(rep.dist_condition.pass);
}

TEST(Hypotheses, ZeroIsVacuous) {
  const auto& s = asymbif::testing::pt_tanh();
  const auto rep = hypothesis_report(catalog::zero(), s.op, 0.0);
  EXPECT_TRUE(rep.dist_condition.pass);
  EXPECT_EQ(rep.lip_estimate, 0.0);
  for (const auto& f : rep.f) EXPECT_NE(f.flag, Flag::violated);
}

TEST(Hypotheses, LinearGrowthIsNotHadamard) {
  const auto& s = asymbif::testing::pt_tanh();
  const auto rep = hypothesis_report(catalog::linear(0.3), s.op, 0.0);
  EXPECT_EQ(rep.f[2].flag, Flag::violated);
  EXPECT_FALSE(rep.f[2].witness.empty());
}

TEST(Catalog, UnknownNamesAndParameters) {
  EXPECT_THROW(catalog::make("nope", {}), Error);
  EXPECT_THROW(catalog::make("tanh", {{"kappa", 1.0}}), Error);
  EXPECT_NO_THROW(catalog::make("tanh", {{"eps", 1.0}}));
}

TEST(Catalog, DeclaredDerivativesMatchFiniteDifferences) {
  for (const auto& name : catalog::names()) {
    const auto nl = asymbif::testing::catalog_sample(name);
    const auto fd = catalog::without_derivative(nl);
    for (double s : {-7.0, -1.3, -0.2, 0.0, 0.4, 1.7, 2.2, 9.0}) {
      EXPECT_NEAR(nl.derivative(0.0, s), fd.derivative(0.0, s), 1e-6) << name << " at " << s;
    }
  }
}

TEST(Catalog, DeclaredLimitsMatchFarField) {
  for (const auto& name : catalog::names()) {
    const auto nl = asymbif::testing::catalog_sample(name);
    if (nl.g_plus) {
      EXPECT_NEAR(nl.g(0.0, 1e9), nl.g_plus(0.0), 1e-6) << name;
      EXPECT_NEAR(nl.g(0.0, -1e9), nl.g_minus(0.0), 1e-6) << name;
    }
    if (nl.h_plus) {
      EXPECT_NEAR(nl.g(0.0, 1e9) * 1e9, nl.h_plus(0.0), 1e-6) << name;
      EXPECT_NEAR(nl.g(0.0, -1e9) * -1e9, nl.h_minus(0.0), 1e-6) << name;
    }
  }
}
