#include "asymbif/potentials.hpp"

#include "asymbif/errors.hpp"

#include <cmath>
#include <memory>
#include <optional>

namespace asymbif::potentials {

namespace {

double sech2(double y) {
  const double c = std::cosh(y);
  return std::isfinite(c) ? 1.0 / (c * c) : 0.0;
}

void require_finite(const std::string& what, double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::invalid_potential, what + " must be finite");
}

void require_positive(const std::string& what, double v) {
  if (!(std::isfinite(v) && v > 0.0)) throw Error(ErrorKind::invalid_potential, what + " must be positive");
}

double param(const std::string& entry, const Params& p, const std::string& key,
             std::optional<double> fallback = std::nullopt) {
  auto it = p.find(key);
  if (it != p.end()) return it->second;
  if (fallback) return *fallback;
  throw Error(ErrorKind::invalid_spec, "potential '" + entry + "' needs parameter '" + key + "'");
}

void reject_unknown(const std::string& entry, const Params& p, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : p) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw Error(ErrorKind::invalid_spec, "potential '" + entry + "' has no parameter '" + k + "'");
  }
}

}  // namespace

Term poschl_teller(double depth, double width) {
  require_finite("poschl_teller depth", depth);
  require_positive("poschl_teller width", width);
  return {[depth, width](double x) { return -depth * sech2(x / width); }, 0.0};
}

Term sech2_barrier(double height, double width) {
  require_finite("sech2_barrier height", height);
  require_positive("sech2_barrier width", width);
  return {[height, width](double x) { return height * sech2(x / width); }, 0.0};
}

Term gaussian_well(double depth, double width) {
  require_finite("gaussian_well depth", depth);
  require_positive("gaussian_well width", width);
  return {[depth, width](double x) {
            const double y = x / width;
            return -depth * std::exp(-y * y);
          },
          0.0};
}

Term constant(double c) {
  require_finite("constant c", c);
  return {[c](double) { return c; }, c};
}

Term sampled(std::vector<double> values, double half_width, double at_infinity) {
  if (values.size() < 2) throw Error(ErrorKind::invalid_potential, "sampled potential needs >= 2 values");
  require_positive("sampled half_width", half_width);
  require_finite("sampled at_infinity", at_infinity);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw Error(ErrorKind::invalid_potential, "sampled potential value " + std::to_string(i) + " is not finite");
    }
  }
  auto data = std::make_shared<const std::vector<double>>(std::move(values));
  return {[data, half_width](double x) {
            const auto& v = *data;
            const double step = 2.0 * half_width / static_cast<double>(v.size() - 1);
            const double pos = (x + half_width) / step;
            if (pos <= 0.0) return v.front();
            if (pos >= static_cast<double>(v.size() - 1)) return v.back();
            const auto i = static_cast<std::size_t>(pos);
            const double t = pos - static_cast<double>(i);
            return (1.0 - t) * v[i] + t * v[i + 1];
          },
          at_infinity};
}

std::vector<std::string> catalog_names() {
  return {"poschl_teller", "sech2_barrier", "gaussian_well", "constant"};
}

Term make_term(const std::string& name, const Params& p) {
  if (name == "poschl_teller") {
    reject_unknown(name, p, {"depth", "width"});
    return poschl_teller(param(name, p, "depth"), param(name, p, "width", 1.0));
  }
  if (name == "sech2_barrier") {
    reject_unknown(name, p, {"height", "width"});
    return sech2_barrier(param(name, p, "height"), param(name, p, "width", 1.0));
  }
  if (name == "gaussian_well") {
    reject_unknown(name, p, {"depth", "width"});
    return gaussian_well(param(name, p, "depth"), param(name, p, "width", 1.0));
  }
  if (name == "constant") {
    reject_unknown(name, p, {"c"});
    return constant(param(name, p, "c"));
  }
  std::string known;
  for (const auto& n : catalog_names()) known += (known.empty() ? "" : ", ") + n;
  throw Error(ErrorKind::invalid_spec, "unknown potential '" + name + "' (known: " + known + ")");
}

PotentialSpec combine(const std::vector<Term>& v_terms, const std::vector<Term>& m_terms) {
  PotentialSpec spec;
  double v_inf = 0.0, m_inf = 0.0;
  for (const auto& t : v_terms) v_inf += t.at_infinity;
  for (const auto& t : m_terms) m_inf += t.at_infinity;
  spec.V = [v_terms](double x) {
    double s = 0.0;
    for (const auto& t : v_terms) s += t.fn(x);
    return s;
  };
  if (!m_terms.empty()) {
    spec.m = [m_terms](double x) {
      double s = 0.0;
      for (const auto& t : m_terms) s += t.fn(x);
      return s;
    };
  }
  spec.v0_at_infinity = v_inf - m_inf;
  return spec;
}

}  // namespace asymbif::potentials
