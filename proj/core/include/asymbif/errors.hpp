#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace asymbif {

enum class ErrorKind {
  invalid_spec,
  invalid_potential,
  not_fredholm,
  empty_kernel,
  band_too_wide,
  near_singular,
  evaluation,
  contraction_infeasible,
  contraction_violated,
  max_iterations,
  degenerate_probe,
  degenerate_linearization,
  no_convergence,
  singular_bordered_system,
  scan_unsupported,
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Non-finite g at a grid node.
class EvaluationError : public Error {
 public:
  EvaluationError(std::size_t index, double x, double s);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

class ContractionInfeasibleError : public Error {
 public:
  ContractionInfeasibleError(double beta, double w_inverse_bound);
  double beta() const noexcept { return beta_; }
  double w_inverse_bound() const noexcept { return w_inverse_bound_; }

 private:
  double beta_;
  double w_inverse_bound_;
};

}  // namespace asymbif
