#pragma once

#include "asymbif/catalog.hpp"
#include "asymbif/nonlinearity.hpp"
#include "asymbif/operator.hpp"
#include "asymbif/reduction.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace asymbif::testing {

// -2 sech^2 on [-15, 15] with 601 points, shifted to its ground state, with
// 0.5 tanh, band 0.5 and safety 0.5. Built once.
struct PtSetup {
  Operator op;
  double lambda0 = 0.0;
  Nonlinearity nl;
  SpectralSplit split;
  ReductionContext ctx;
};

const PtSetup& pt_tanh();

Operator pt_operator(double depth = 2.0, double half_width = 15.0, int n_points = 601);

// Context around lambda0 for an arbitrary nonlinearity on the shifted operator.
ReductionContext make_context(const Operator& shifted, double band, double beta, double safety = 0.5);

Vector random_vector(std::mt19937_64& rng, Index n);

// Unit vector along the first Z basis direction, in Z coordinates.
Vector unit_z(const SpectralSplit& split);

// Catalog entry by name with a representative parameter (eps or kappa 0.7).
Nonlinearity catalog_sample(const std::string& name);

std::string scenario_path(const std::string& name);

}  // namespace asymbif::testing
