#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace asymbif {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

// Sample points plus the quadrature weight used by every inner product.
struct Mesh {
  Vector nodes;
  double weight = 1.0;

  Index size() const { return nodes.size(); }
  double dot(const Vector& a, const Vector& b) const { return weight * a.dot(b); }
  double norm(const Vector& a) const;
  double one_norm(const Vector& a) const { return weight * a.lpNorm<1>(); }
};

// Uniform grid on [-X, X] with Dirichlet walls at both ends. Only the
// n_points - 2 interior nodes carry unknowns.
class Grid {
 public:
  Grid(double half_width, int n_points);

  double half_width() const { return half_width_; }
  int n_points() const { return n_points_; }
  double spacing() const { return 2.0 * half_width_ / (n_points_ - 1); }
  int unknowns() const { return n_points_ - 2; }
  double node(int i) const { return -half_width_ + i * spacing(); }
  Vector interior_nodes() const;
  Grid doubled() const { return Grid(half_width_, 2 * n_points_); }

 private:
  double half_width_;
  int n_points_;
};

// Declared stand-in for sigma_e: nothing, a half line [lower, inf), or points.
class EssentialSpectrum {
 public:
  enum class Kind { empty, half_line, points };

  static EssentialSpectrum empty();
  static EssentialSpectrum half_line(double lower);
  static EssentialSpectrum points(std::vector<double> values);

  Kind kind() const { return kind_; }
  double lower() const { return lower_; }
  const std::vector<double>& values() const { return values_; }

  bool is_empty() const;
  bool contains(double lambda) const;
  double distance(double lambda) const;  // +inf when empty
  EssentialSpectrum shifted(double s) const;
  std::string describe() const;

 private:
  Kind kind_ = Kind::empty;
  double lower_ = 0.0;
  std::vector<double> values_;
};

struct PotentialSpec {
  std::function<double(double)> V;
  std::function<double(double)> m;  // may be empty, meaning m = 0
  double v0_at_infinity = 0.0;

  double v0(double x) const { return V(x) - (m ? m(x) : 0.0); }
};

enum class OperatorKind { schrodinger1d, synthetic };

struct Operator {
  OperatorKind kind = OperatorKind::synthetic;
  Matrix matrix;
  Vector eigenvalues;   // ascending
  Matrix eigenvectors;  // columns, orthonormal in mesh.dot
  EssentialSpectrum sigma_e;
  Mesh mesh;
  double shift = 0.0;
  std::optional<Grid> grid;

  Index size() const { return matrix.rows(); }
  double spectral_radius() const;
  Vector apply(const Vector& u) const { return matrix * u; }
};

Operator build_schrodinger_1d(const Grid& grid, const PotentialSpec& pot, double shift);

// Eigenvalues only; used for grid-doubling drift where eigenvectors are not needed.
Vector schrodinger_eigenvalues(const Grid& grid, const PotentialSpec& pot, double shift);

Operator build_synthetic(const std::vector<double>& eigenvalues, EssentialSpectrum sigma_e);

// Q diag(eigenvalues) Q^T with a seeded random orthogonal Q.
Operator build_synthetic_rotated(const std::vector<double>& eigenvalues, EssentialSpectrum sigma_e,
                                 std::uint64_t seed);

// L - s: same eigenvectors, shifted eigenvalues and sigma_e.
Operator shift_operator(const Operator& op, double s);

double gamma_value(const Operator& op, double lambda0);

// Isolated eigenvalue (outside sigma_e) nearest to probe. Throws empty_kernel if none.
double nearest_isolated_eigenvalue(const Operator& op, double probe);

struct SpectralSplit {
  double band = 0.0;
  std::vector<Index> z_indices;  // columns of op.eigenvectors spanning Z
  std::vector<Index> w_indices;
  Matrix z_basis;
  Vector z_eigenvalues;
  Vector w_eigenvalues;
  double d_gap = 0.0;        // dist(0, B), B = excluded eigenvalues and sigma_e
  double nonzero_gap = 0.0;  // dist(0, sigma(L) \ {0})
  double w_inverse_bound = 0.0;

  Index dim() const { return z_basis.cols(); }
  Vector z_coordinates(const Mesh& mesh, const Vector& u) const;
  Vector embed(const Vector& coords) const { return z_basis * coords; }
  Vector project_w(const Mesh& mesh, const Vector& u) const;
  // dist(lambda, excluded eigenvalues); sigma_e not included.
  double excluded_distance(double lambda) const;
};

SpectralSplit spectral_split(const Operator& op, double d);

// w in W with (L - lambda) w = P y, by eigen-expansion over the excluded eigenpairs.
Vector inverse_on_w(const SpectralSplit& split, const Operator& op, double lambda, const Vector& y);

// Eigenvalues with |mu| at or below this are treated as kernel.
double kernel_tolerance(const Operator& op);

}  // namespace asymbif
