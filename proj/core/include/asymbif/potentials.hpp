#pragma once

#include "asymbif/operator.hpp"

#include <map>
#include <string>
#include <vector>

namespace asymbif::potentials {

struct Term {
  std::function<double(double)> fn;
  double at_infinity = 0.0;
};

using Params = std::map<std::string, double>;

// -depth * sech^2(x / width)
Term poschl_teller(double depth, double width = 1.0);
// +height * sech^2(x / width)
Term sech2_barrier(double height, double width);
// -depth * exp(-(x / width)^2)
Term gaussian_well(double depth, double width);
Term constant(double c);
// Piecewise-linear interpolant of samples on a uniform grid over [-X, X];
// constant extension outside.
Term sampled(std::vector<double> values, double half_width, double at_infinity);

Term make_term(const std::string& name, const Params& params);
std::vector<std::string> catalog_names();

// V = sum of v_terms, m = sum of m_terms.
PotentialSpec combine(const std::vector<Term>& v_terms, const std::vector<Term>& m_terms);

}  // namespace asymbif::potentials
