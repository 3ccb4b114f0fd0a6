#include "asymbif/errors.hpp"

#include <sstream>

namespace asymbif {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_spec: return "invalid-spec";
    case ErrorKind::invalid_potential: return "invalid-potential";
    case ErrorKind::not_fredholm: return "not-fredholm";
    case ErrorKind::empty_kernel: return "empty-kernel";
    case ErrorKind::band_too_wide: return "band-too-wide";
    case ErrorKind::near_singular: return "near-singular";
    case ErrorKind::evaluation: return "evaluation";
    case ErrorKind::contraction_infeasible: return "contraction-infeasible";
    case ErrorKind::contraction_violated: return "contraction-violated";
    case ErrorKind::max_iterations: return "max-iterations";
    case ErrorKind::degenerate_probe: return "degenerate-probe";
    case ErrorKind::degenerate_linearization: return "degenerate-linearization";
    case ErrorKind::no_convergence: return "no-convergence";
    case ErrorKind::singular_bordered_system: return "singular-bordered-system";
    case ErrorKind::scan_unsupported: return "scan-unsupported";
  }
  return "unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

namespace {

std::string evaluation_message(std::size_t index, double x, double s) {
  std::ostringstream os;
  os.precision(17);
  os << "non-finite g at index " << index << " (x=" << x << ", s=" << s << ")";
  return os.str();
}

std::string contraction_message(double beta, double w_inv) {
  std::ostringstream os;
  os.precision(17);
  os << "beta*W_inverse_bound = " << beta << "*" << w_inv << " = " << beta * w_inv << " >= 1";
  return os.str();
}

}  // namespace

EvaluationError::EvaluationError(std::size_t index, double x, double s)
    : Error(ErrorKind::evaluation, evaluation_message(index, x, s)), index_(index) {}

ContractionInfeasibleError::ContractionInfeasibleError(double beta, double w_inverse_bound)
    : Error(ErrorKind::contraction_infeasible, contraction_message(beta, w_inverse_bound)),
      beta_(beta),
      w_inverse_bound_(w_inverse_bound) {}

}  // namespace asymbif
