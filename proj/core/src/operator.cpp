#include "asymbif/operator.hpp"

#include "asymbif/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

namespace asymbif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// Diagonal and off-diagonal of the unweighted 3-point stencil; the matrix is
// symmetric in the plain product and so is the weighted one (constant weight).
void stencil(const Grid& grid, const PotentialSpec& pot, double shift, Vector& diag, Vector& off) {
  if (!std::isfinite(shift)) throw Error(ErrorKind::invalid_spec, "shift must be finite");
  if (!pot.V) throw Error(ErrorKind::invalid_potential, "potential V is missing");
  const int n = grid.unknowns();
  const double h = grid.spacing();
  const double inv_h2 = 1.0 / (h * h);
  diag.resize(n);
  off = Vector::Constant(std::max(n - 1, 0), -inv_h2);
  for (int i = 0; i < n; ++i) {
    const double x = grid.node(i + 1);
    const double v = pot.v0(x);
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::invalid_potential, "non-finite V0 at x=" + fmt(x));
    }
    diag(i) = 2.0 * inv_h2 + v - shift;
  }
}

}  // namespace

double Mesh::norm(const Vector& a) const { return std::sqrt(weight) * a.norm(); }

Grid::Grid(double half_width, int n_points) : half_width_(half_width), n_points_(n_points) {
  if (!(std::isfinite(half_width) && half_width > 0.0)) {
    throw Error(ErrorKind::invalid_spec, "grid half_width must be positive and finite");
  }
  if (n_points < 3) throw Error(ErrorKind::invalid_spec, "grid needs n_points >= 3");
}

Vector Grid::interior_nodes() const {
  Vector x(unknowns());
  for (int i = 0; i < unknowns(); ++i) x(i) = node(i + 1);
  return x;
}

EssentialSpectrum EssentialSpectrum::empty() { return {}; }

EssentialSpectrum EssentialSpectrum::half_line(double lower) {
  if (!std::isfinite(lower)) throw Error(ErrorKind::invalid_spec, "sigma_e lower bound must be finite");
  EssentialSpectrum e;
  e.kind_ = Kind::half_line;
  e.lower_ = lower;
  return e;
}

EssentialSpectrum EssentialSpectrum::points(std::vector<double> values) {
  for (double v : values) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_spec, "sigma_e points must be finite");
  }
  std::sort(values.begin(), values.end());
  EssentialSpectrum e;
  e.kind_ = values.empty() ? Kind::empty : Kind::points;
  e.values_ = std::move(values);
  return e;
}

bool EssentialSpectrum::is_empty() const { return kind_ == Kind::empty; }

bool EssentialSpectrum::contains(double lambda) const { return distance(lambda) == 0.0; }

double EssentialSpectrum::distance(double lambda) const {
  switch (kind_) {
    case Kind::empty:
      return kInf;
    case Kind::half_line:
      return std::max(lower_ - lambda, 0.0);
    case Kind::points: {
      double d = kInf;
      for (double v : values_) d = std::min(d, std::abs(v - lambda));
      return d;
    }
  }
  return kInf;
}

EssentialSpectrum EssentialSpectrum::shifted(double s) const {
  EssentialSpectrum e = *this;
  e.lower_ -= s;
  for (double& v : e.values_) v -= s;
  return e;
}

std::string EssentialSpectrum::describe() const {
  switch (kind_) {
    case Kind::empty:
      return "empty";
    case Kind::half_line:
      return "[" + fmt(lower_) + ", inf)";
    case Kind::points: {
      std::string s = "{";
      for (std::size_t i = 0; i < values_.size(); ++i) s += (i ? ", " : "") + fmt(values_[i]);
      return s + "}";
    }
  }
  return "";
}

double Operator::spectral_radius() const {
  if (eigenvalues.size() == 0) return 0.0;
  return std::max(std::abs(eigenvalues(0)), std::abs(eigenvalues(eigenvalues.size() - 1)));
}

Operator build_schrodinger_1d(const Grid& grid, const PotentialSpec& pot, double shift) {
  Vector diag, off;
  stencil(grid, pot, shift, diag, off);
  const Index n = diag.size();

  Operator op;
  op.kind = OperatorKind::schrodinger1d;
  op.grid = grid;
  op.shift = shift;
  op.mesh.nodes = grid.interior_nodes();
  op.mesh.weight = grid.spacing();
  op.sigma_e = EssentialSpectrum::half_line(pot.v0_at_infinity - shift);

  op.matrix = Matrix::Zero(n, n);
  op.matrix.diagonal() = diag;
  if (n > 1) {
    op.matrix.diagonal(1) = off;
    op.matrix.diagonal(-1) = off;
  }

  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::invalid_potential, "eigensolve failed");
  op.eigenvalues = es.eigenvalues();
  op.eigenvectors = es.eigenvectors() / std::sqrt(op.mesh.weight);
  return op;
}

Vector schrodinger_eigenvalues(const Grid& grid, const PotentialSpec& pot, double shift) {
  Vector diag, off;
  stencil(grid, pot, shift, diag, off);
  Eigen::SelfAdjointEigenSolver<Matrix> es;
  es.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error(ErrorKind::invalid_potential, "eigensolve failed");
  return es.eigenvalues();
}

namespace {

Operator synthetic_frame(const std::vector<double>& eigenvalues, EssentialSpectrum sigma_e) {
  if (eigenvalues.empty()) throw Error(ErrorKind::invalid_spec, "synthetic operator needs eigenvalues");
  for (double v : eigenvalues) {
    if (!std::isfinite(v)) throw Error(ErrorKind::invalid_spec, "synthetic eigenvalues must be finite");
  }
  const Index n = static_cast<Index>(eigenvalues.size());
  Operator op;
  op.kind = OperatorKind::synthetic;
  op.sigma_e = std::move(sigma_e);
  op.mesh.nodes = Vector::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  op.mesh.weight = 1.0;
  std::vector<double> sorted = eigenvalues;
  std::sort(sorted.begin(), sorted.end());
  op.eigenvalues = Eigen::Map<const Vector>(sorted.data(), n);
  return op;
}

}  // namespace

Operator build_synthetic(const std::vector<double>& eigenvalues, EssentialSpectrum sigma_e) {
  Operator op = synthetic_frame(eigenvalues, std::move(sigma_e));
  op.matrix = op.eigenvalues.asDiagonal();
  op.eigenvectors = Matrix::Identity(op.eigenvalues.size(), op.eigenvalues.size());
  return op;
}

Operator build_synthetic_rotated(const std::vector<double>& eigenvalues, EssentialSpectrum sigma_e,
                                 std::uint64_t seed) {
  Operator op = synthetic_frame(eigenvalues, std::move(sigma_e));
  const Index n = op.eigenvalues.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix a(n, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < n; ++i) a(i, j) = normal(rng);
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  op.eigenvectors = q;
  Matrix m = q * op.eigenvalues.asDiagonal() * q.transpose();
  op.matrix = 0.5 * (m + m.transpose());
  return op;
}

Operator shift_operator(const Operator& op, double s) {
  if (!std::isfinite(s)) throw Error(ErrorKind::invalid_spec, "shift must be finite");
  Operator out = op;
  out.matrix.diagonal().array() -= s;
  out.eigenvalues.array() -= s;
  out.sigma_e = op.sigma_e.shifted(s);
  out.shift = op.shift + s;
  return out;
}

double gamma_value(const Operator& op, double lambda0) {
  if (op.sigma_e.is_empty()) return 0.0;
  const double d = op.sigma_e.distance(lambda0);
  if (d == 0.0) {
    throw Error(ErrorKind::not_fredholm,
                "lambda0=" + fmt(lambda0) + " lies in sigma_e " + op.sigma_e.describe());
  }
  return 1.0 / d;
}

double nearest_isolated_eigenvalue(const Operator& op, double probe) {
  double best = std::numeric_limits<double>::quiet_NaN();
  double best_d = kInf;
  for (Index i = 0; i < op.eigenvalues.size(); ++i) {
    const double mu = op.eigenvalues(i);
    if (op.sigma_e.contains(mu)) continue;
    const double d = std::abs(mu - probe);
    if (d < best_d) {
      best_d = d;
      best = mu;
    }
  }
  if (!std::isfinite(best)) {
    throw Error(ErrorKind::empty_kernel, "no isolated eigenvalue outside sigma_e " + op.sigma_e.describe());
  }
  return best;
}

double kernel_tolerance(const Operator& op) { return 1e-9 * (1.0 + op.spectral_radius()); }

Vector SpectralSplit::z_coordinates(const Mesh& mesh, const Vector& u) const {
  return mesh.weight * (z_basis.transpose() * u);
}

Vector SpectralSplit::project_w(const Mesh& mesh, const Vector& u) const {
  return u - z_basis * z_coordinates(mesh, u);
}

double SpectralSplit::excluded_distance(double lambda) const {
  if (w_eigenvalues.size() == 0) return kInf;
  return (w_eigenvalues.array() - lambda).abs().minCoeff();
}

SpectralSplit spectral_split(const Operator& op, double d) {
  if (!(std::isfinite(d) && d > 0.0)) throw Error(ErrorKind::invalid_spec, "band d must be positive");
  const double to_sigma_e = op.sigma_e.distance(0.0);
  if (d >= to_sigma_e) {
    throw Error(ErrorKind::band_too_wide,
                "band d=" + fmt(d) + " reaches sigma_e at distance " + fmt(to_sigma_e));
  }
  SpectralSplit split;
  split.band = d;
  const double ktol = kernel_tolerance(op);
  double d_gap = to_sigma_e;
  double nonzero = to_sigma_e;
  std::vector<double> z_mu, w_mu;
  for (Index i = 0; i < op.eigenvalues.size(); ++i) {
    const double mu = op.eigenvalues(i);
    if (std::abs(mu) <= d) {
      split.z_indices.push_back(i);
      z_mu.push_back(mu);
    } else {
      split.w_indices.push_back(i);
      w_mu.push_back(mu);
      d_gap = std::min(d_gap, std::abs(mu));
    }
    if (std::abs(mu) > ktol) nonzero = std::min(nonzero, std::abs(mu));
  }
  if (split.z_indices.empty()) {
    throw Error(ErrorKind::empty_kernel, "no eigenvalue in [-" + fmt(d) + ", " + fmt(d) + "]");
  }
  split.z_basis.resize(op.size(), static_cast<Index>(split.z_indices.size()));
  for (std::size_t j = 0; j < split.z_indices.size(); ++j) {
    split.z_basis.col(static_cast<Index>(j)) = op.eigenvectors.col(split.z_indices[j]);
  }
  split.z_eigenvalues = Eigen::Map<const Vector>(z_mu.data(), static_cast<Index>(z_mu.size()));
  split.w_eigenvalues = Eigen::Map<const Vector>(w_mu.data(), static_cast<Index>(w_mu.size()));
  split.d_gap = d_gap;
  split.nonzero_gap = nonzero;
  split.w_inverse_bound = std::isfinite(d_gap) ? 1.0 / d_gap : 0.0;
  return split;
}

Vector inverse_on_w(const SpectralSplit& split, const Operator& op, double lambda, const Vector& y) {
  if (split.excluded_distance(lambda) <= 1e-10) {
    throw Error(ErrorKind::near_singular, "lambda=" + fmt(lambda) + " within 1e-10 of an excluded eigenvalue");
  }
  Vector c = op.mesh.weight * (op.eigenvectors.transpose() * y);
  for (Index i : split.z_indices) c(i) = 0.0;
  for (Index i : split.w_indices) c(i) /= (op.eigenvalues(i) - lambda);
  return op.eigenvectors * c;
}

}  // namespace asymbif
