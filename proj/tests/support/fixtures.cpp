#include "fixtures.hpp"

#include "asymbif/potentials.hpp"

namespace asymbif::testing {

Operator pt_operator(double depth, double half_width, int n_points) {
  const auto pot = potentials::combine({potentials::poschl_teller(depth)}, {});
  return build_schrodinger_1d(Grid(half_width, n_points), pot, 0.0);
}

const PtSetup& pt_tanh() {
  static const PtSetup setup = [] {
    PtSetup s;
    const Operator op0 = pt_operator();
    s.lambda0 = nearest_isolated_eigenvalue(op0, -1.0);
    s.op = shift_operator(op0, s.lambda0);
    s.nl = catalog::tanh(0.5);
    s.split = spectral_split(s.op, 0.5);
    s.ctx = configure(s.split, 0.5, 0.5);
    return s;
  }();
  return setup;
}

ReductionContext make_context(const Operator& shifted, double band, double beta, double safety) {
  return configure(spectral_split(shifted, band), beta, safety);
}

Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> normal;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

Vector unit_z(const SpectralSplit& split) {
  Vector z = Vector::Zero(split.dim());
  z(0) = 1.0;
  return z;
}

Nonlinearity catalog_sample(const std::string& name) {
  if (name == "zero") return catalog::zero();
  const bool eps = name == "linear" || name == "tanh" || name == "atan";
  return catalog::make(name, {{eps ? "eps" : "kappa", 0.7}});
}

std::string scenario_path(const std::string& name) {
  return std::string(ASYMBIF_SCENARIO_DIR) + "/" + name + ".json";
}

}  // namespace asymbif::testing
