#include "asymbif/detection.hpp"

#include "asymbif/errors.hpp"

#include <boost/math/special_functions/erf.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

namespace asymbif {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

int nth_prime(int k) {
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71};
  if (k < 20) return primes[k];
  int p = 73, found = 20;
  for (;; p += 2) {
    bool is_prime = true;
    for (int d = 3; d * d <= p; d += 2) is_prime = is_prime && p % d != 0;
    if (is_prime && found++ == k) return p;
  }
}

// Decide pass/fail from the sampled range of integrals. Nonneg modes need
// every sample > 0, nonpos modes every sample < 0, no mode accepts either.
CheckStatus decide(double lo, double hi, bool want_pos, bool want_neg) {
  if (want_pos) return lo > 0.0 ? CheckStatus::pass : CheckStatus::fail;
  if (want_neg) return hi < 0.0 ? CheckStatus::pass : CheckStatus::fail;
  return (lo > 0.0 || hi < 0.0) ? CheckStatus::pass : CheckStatus::fail;
}

}  // namespace

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::not_applicable: return "not-applicable";
  }
  return "not-applicable";
}

const char* to_string(WitnessVerdict v) {
  switch (v) {
    case WitnessVerdict::bifurcation_certified: return "bifurcation-certified";
    case WitnessVerdict::even_multiplicity_certified: return "even-multiplicity-certified";
    case WitnessVerdict::no_witness: return "no-witness";
  }
  return "no-witness";
}

DegreeReport degree_at(const SpectralSplit& split, double lambda) {
  DegreeReport r;
  r.lambda = lambda;
  for (Index i = 0; i < split.z_eigenvalues.size(); ++i) {
    const double shifted = split.z_eigenvalues(i) - lambda;
    if (std::abs(shifted) <= 1e-12) {
      throw Error(ErrorKind::degenerate_linearization, "lambda=" + fmt(lambda) + " is a Z eigenvalue");
    }
    if (shifted < 0.0) ++r.negative_count;
  }
  r.degree = (r.negative_count % 2 == 0) ? 1 : -1;
  r.valid_radius_note =
      "degree of L_lambda on Z; equals deg(F_lambda, B_R, 0) only for R large enough that "
      "L_lambda z - t K_lambda(z) != 0 for |z| >= R, t in [0,1]";
  return r;
}

WitnessReport parity_and_morse(const SpectralSplit& split, double delta) {
  if (!(delta > 0.0)) throw Error(ErrorKind::invalid_spec, "delta must be positive");
  WitnessReport w;
  for (Index i = 0; i < split.z_eigenvalues.size(); ++i) {
    if (std::abs(split.z_eigenvalues(i)) < delta) ++w.kernel_dim;
  }
  w.degree_plus = degree_at(split, delta);
  w.degree_minus = degree_at(split, -delta);
  w.morse_m = w.degree_plus.negative_count;
  w.morse_n = w.degree_minus.negative_count;
  w.parity_jump = (w.kernel_dim % 2) == 1;
  w.critical_groups_differ = w.morse_m != w.morse_n;
  w.verdict = w.parity_jump ? WitnessVerdict::bifurcation_certified : WitnessVerdict::no_witness;
  return w;
}

void attach_sign_checks(WitnessReport& report, const IntegralCheck& f5, const IntegralCheck& f6) {
  report.ll_f5 = f5;
  report.ll_f6 = f6;
  const bool sign_ok = f5.status == CheckStatus::pass || f6.status == CheckStatus::pass;
  if (report.parity_jump) {
    report.verdict = WitnessVerdict::bifurcation_certified;
  } else if (report.critical_groups_differ && sign_ok) {
    report.verdict = WitnessVerdict::even_multiplicity_certified;
  } else {
    report.verdict = WitnessVerdict::no_witness;
  }
}

Matrix kernel_basis(const SpectralSplit& split, double delta) {
  std::vector<Index> cols;
  for (Index i = 0; i < split.z_eigenvalues.size(); ++i) {
    if (std::abs(split.z_eigenvalues(i)) < delta) cols.push_back(i);
  }
  Matrix k(split.z_basis.rows(), static_cast<Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) k.col(static_cast<Index>(j)) = split.z_basis.col(cols[j]);
  return k;
}

int default_sphere_samples(int dim) { return 2 * dim * dim + 64; }

std::vector<Vector> kernel_sphere_samples(int dim, int count, std::uint64_t seed) {
  std::vector<Vector> out;
  if (dim < 1) return out;
  if (dim == 1) {
    out.push_back(Vector::Constant(1, 1.0));
    out.push_back(Vector::Constant(1, -1.0));
    return out;
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> shift(static_cast<std::size_t>(dim));
  for (auto& s : shift) s = unit(rng);
  out.reserve(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) {
    Vector v(dim);
    if (dim == 2) {
      const double th = 2.0 * std::numbers::pi * (j + shift[0]) / count;
      v << std::cos(th), std::sin(th);
    } else if (dim == 3) {
      const double zc = 1.0 - (2.0 * j + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
      const double frac = std::fmod(j * (std::numbers::phi - 1.0) + shift[0], 1.0);
      const double th = 2.0 * std::numbers::pi * frac;
      v << r * std::cos(th), r * std::sin(th), zc;
    } else {
      for (int c = 0; c < dim; ++c) {
        double u = std::fmod(radical_inverse(static_cast<std::uint64_t>(j + 1), nth_prime(c)) + shift[c], 1.0);
        u = std::clamp(u, 1e-12, 1.0 - 1e-12);
        v(c) = std::numbers::sqrt2 * boost::math::erf_inv(2.0 * u - 1.0);
      }
      const double nv = v.norm();
      if (nv == 0.0) continue;
      v /= nv;
    }
    out.push_back(v);
  }
  return out;
}

double landesman_lazer_integral(const Nonlinearity& nl, const Mesh& mesh, const Vector& z) {
  double sum = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) {
      sum += nl.g_plus(mesh.nodes(i)) * z(i);
    } else if (z(i) < 0.0) {
      sum += nl.g_minus(mesh.nodes(i)) * z(i);
    }
  }
  return mesh.weight * sum;
}

double f6_integral(const Nonlinearity& nl, const Mesh& mesh, const Vector& z) {
  double sum = 0.0;
  for (Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) {
      sum += nl.h_plus(mesh.nodes(i));
    } else if (z(i) < 0.0) {
      sum += nl.h_minus(mesh.nodes(i));
    }
  }
  return mesh.weight * sum;
}

namespace {

template <typename Integral>
IntegralCheck sphere_check(const Mesh& mesh, const Matrix& kernel, int sphere_samples, std::uint64_t seed,
                           bool want_pos, bool want_neg, Integral integral) {
  IntegralCheck c;
  const int dim = static_cast<int>(kernel.cols());
  if (dim < 1) {
    c.note = "empty kernel";
    return c;
  }
  c.min_integral = std::numeric_limits<double>::infinity();
  c.max_integral = -std::numeric_limits<double>::infinity();
  for (const Vector& a : kernel_sphere_samples(dim, sphere_samples, seed)) {
    Vector zt = kernel * a;
    zt /= mesh.norm(zt);
    const double v = integral(zt);
    c.min_integral = std::min(c.min_integral, v);
    c.max_integral = std::max(c.max_integral, v);
    ++c.samples;
  }
  c.status = decide(c.min_integral, c.max_integral, want_pos, want_neg);
  return c;
}

}  // namespace

IntegralCheck landesman_lazer_f5(const Nonlinearity& nl, const Mesh& mesh, const Matrix& kernel,
                                 int sphere_samples, std::uint64_t seed) {
  if (!nl.g_plus || !nl.g_minus) {
    IntegralCheck c;
    c.note = "g+- not declared";
    return c;
  }
  auto c = sphere_check(mesh, kernel, sphere_samples, seed, nl.sign_mode == SignMode::f5_nonneg,
                        nl.sign_mode == SignMode::f5_nonpos,
                        [&](const Vector& z) { return landesman_lazer_integral(nl, mesh, z); });
  if (c.status == CheckStatus::fail) c.note = "integral not single-signed over the kernel sphere";
  return c;
}

IntegralCheck sign_condition_f6(const Nonlinearity& nl, const Mesh& mesh, const Matrix& kernel,
                                int sphere_samples, std::uint64_t seed) {
  IntegralCheck c;
  if (!nl.h_plus || !nl.h_minus) {
    c.note = "h+- not declared";
    return c;
  }
  bool nonneg = true, nonpos = true;
  for (double x : sample_nodes(mesh, 33)) {
    for (double s : hypothesis_s_samples()) {
      const double gs = nl.g(x, s) * s;
      nonneg = nonneg && gs >= 0.0;
      nonpos = nonpos && gs <= 0.0;
    }
  }
  if (!nonneg && !nonpos) {
    c.status = CheckStatus::fail;
    c.note = "g*s changes sign";
    return c;
  }
  const bool want_pos = nl.sign_mode == SignMode::f6_nonneg || (nonneg && !nonpos);
  const bool want_neg = nl.sign_mode == SignMode::f6_nonpos || (nonpos && !nonneg);
  c = sphere_check(mesh, kernel, sphere_samples, seed, want_pos, want_neg,
                   [&](const Vector& z) { return f6_integral(nl, mesh, z); });
  if (c.status == CheckStatus::fail) c.note = "h-integral not strictly single-signed";
  return c;
}

}  // namespace asymbif
