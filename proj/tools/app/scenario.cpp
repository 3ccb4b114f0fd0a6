#include "scenario.hpp"

#include "asymbif/catalog.hpp"
#include "asymbif/errors.hpp"
#include "asymbif/potentials.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <initializer_list>
#include <sstream>

namespace asymbif::app {

namespace {

std::string join_issues(const std::vector<SchemaIssue>& issues) {
  std::string s = "scenario schema violations:";
  for (const auto& i : issues) s += "\n  " + (i.path.empty() ? std::string("/") : i.path) + ": " + i.message;
  return s;
}

std::string escape(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

std::string at(const std::string& path, const std::string& key) { return path + "/" + escape(key); }
std::string at(const std::string& path, std::size_t i) { return path + "/" + std::to_string(i); }

std::string join(const std::vector<std::string>& names) {
  std::string s;
  for (const auto& n : names) s += (s.empty() ? "" : ", ") + n;
  return s;
}

class Reader {
 public:
  std::vector<SchemaIssue> issues;

  void fail(const std::string& path, const std::string& msg) { issues.push_back({path, msg}); }

  bool object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    fail(path, "expected an object");
    return false;
  }

  void only(const json& obj, const std::string& path, std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : obj.items()) {
      bool ok = false;
      for (const char* a : keys) ok = ok || k == a;
      if (!ok) fail(at(path, k), "unknown key");
    }
  }

  const json* find(const json& obj, const std::string& path, const char* key, bool required) {
    auto it = obj.find(key);
    if (it == obj.end()) {
      if (required) fail(at(path, key), "required key missing");
      return nullptr;
    }
    return &*it;
  }

  std::optional<double> number(const json& v, const std::string& path) {
    if (!v.is_number()) {
      fail(path, "expected a number");
      return std::nullopt;
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
      fail(path, "must be finite");
      return std::nullopt;
    }
    return d;
  }

  std::optional<double> number(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    return v ? number(*v, at(path, key)) : std::nullopt;
  }

  std::optional<double> positive(const json& obj, const std::string& path, const char* key, bool required) {
    auto d = number(obj, path, key, required);
    if (d && !(*d > 0.0)) {
      fail(at(path, key), "must be positive");
      return std::nullopt;
    }
    return d;
  }

  std::optional<int> integer(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_number_integer()) {
      fail(at(path, key), "expected an integer");
      return std::nullopt;
    }
    return v->get<int>();
  }

  std::optional<std::string> string(const json& obj, const std::string& path, const char* key, bool required) {
    const json* v = find(obj, path, key, required);
    if (!v) return std::nullopt;
    if (!v->is_string()) {
      fail(at(path, key), "expected a string");
      return std::nullopt;
    }
    return v->get<std::string>();
  }

  std::vector<double> numbers(const json& v, const std::string& path, bool nonempty) {
    std::vector<double> out;
    if (!v.is_array()) {
      fail(path, "expected an array of numbers");
      return out;
    }
    if (nonempty && v.empty()) fail(path, "must not be empty");
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (auto d = number(v[i], at(path, i))) out.push_back(*d);
    }
    return out;
  }

  std::map<std::string, double> params(const json& obj, const std::string& path) {
    std::map<std::string, double> out;
    const json* p = find(obj, path, "params", false);
    if (!p) return out;
    const std::string pp = at(path, "params");
    if (!object(*p, pp)) return out;
    for (const auto& [k, v] : p->items()) {
      if (auto d = number(v, at(pp, k))) out[k] = *d;
    }
    return out;
  }
};

void parse_terms(Reader& r, const json& pot, const std::string& path, const char* key, std::vector<TermSpec>& out,
                 double half_width) {
  const json* terms = r.find(pot, path, key, std::string(key) == "V");
  if (!terms) return;
  const std::string tp = at(path, key);
  if (!terms->is_array()) {
    r.fail(tp, "expected an array of potential terms");
    return;
  }
  for (std::size_t i = 0; i < terms->size(); ++i) {
    const json& t = (*terms)[i];
    const std::string p = at(tp, i);
    if (!r.object(t, p)) continue;
    TermSpec spec;
    if (t.contains("sampled")) {
      r.only(t, p, {"sampled", "at_infinity", "half_width"});
      spec.name = "sampled";
      spec.samples = r.numbers(t["sampled"], at(p, "sampled"), true);
      if (spec.samples.size() == 1) r.fail(at(p, "sampled"), "needs at least 2 samples");
      spec.at_infinity = r.number(t, p, "at_infinity", true).value_or(0.0);
      spec.params["half_width"] = r.positive(t, p, "half_width", false).value_or(half_width);
    } else {
      r.only(t, p, {"name", "params"});
      spec.name = r.string(t, p, "name", true).value_or("");
      spec.params = r.params(t, p);
      if (!spec.name.empty()) {
        try {
          potentials::make_term(spec.name, spec.params);
        } catch (const Error& e) {
          r.fail(at(p, "name"), e.what());
        }
      }
    }
    out.push_back(std::move(spec));
  }
}

EssentialSpectrum parse_sigma_e(Reader& r, const json& v, const std::string& path) {
  if (!r.object(v, path)) return EssentialSpectrum::empty();
  const auto type = r.string(v, path, "type", true).value_or("");
  if (type == "empty") {
    r.only(v, path, {"type"});
    return EssentialSpectrum::empty();
  }
  if (type == "half_line") {
    r.only(v, path, {"type", "lower"});
    return EssentialSpectrum::half_line(r.number(v, path, "lower", true).value_or(0.0));
  }
  if (type == "points") {
    r.only(v, path, {"type", "values"});
    const json* vals = r.find(v, path, "values", true);
    return EssentialSpectrum::points(vals ? r.numbers(*vals, at(path, "values"), true) : std::vector<double>{});
  }
  if (!type.empty()) r.fail(at(path, "type"), "expected one of: empty, half_line, points");
  return EssentialSpectrum::empty();
}

void parse_operator(Reader& r, const json& v, const std::string& path, OperatorConfig& op) {
  if (!r.object(v, path)) return;
  const auto kind = r.string(v, path, "kind", true).value_or("");
  if (kind == "schrodinger1d") {
    r.only(v, path, {"kind", "grid", "potential"});
    op.kind = OperatorKind::schrodinger1d;
    if (const json* g = r.find(v, path, "grid", true); g && r.object(*g, at(path, "grid"))) {
      const std::string gp = at(path, "grid");
      r.only(*g, gp, {"half_width", "n_points"});
      op.half_width = r.positive(*g, gp, "half_width", true).value_or(1.0);
      op.n_points = r.integer(*g, gp, "n_points", true).value_or(3);
      if (op.n_points < 3) r.fail(at(gp, "n_points"), "must be >= 3");
    }
    if (const json* p = r.find(v, path, "potential", true); p && r.object(*p, at(path, "potential"))) {
      const std::string pp = at(path, "potential");
      r.only(*p, pp, {"V", "m"});
      parse_terms(r, *p, pp, "V", op.v_terms, op.half_width);
      parse_terms(r, *p, pp, "m", op.m_terms, op.half_width);
    }
  } else if (kind == "synthetic") {
    r.only(v, path, {"kind", "eigenvalues", "sigma_e", "rotate"});
    op.kind = OperatorKind::synthetic;
    if (const json* e = r.find(v, path, "eigenvalues", true)) op.eigenvalues = r.numbers(*e, at(path, "eigenvalues"), true);
    if (const json* s = r.find(v, path, "sigma_e", true)) op.sigma_e = parse_sigma_e(r, *s, at(path, "sigma_e"));
    if (const json* rot = r.find(v, path, "rotate", false)) {
      if (rot->is_boolean()) {
        op.rotate = rot->get<bool>();
      } else {
        r.fail(at(path, "rotate"), "expected a boolean");
      }
    }
  } else if (!kind.empty()) {
    r.fail(at(path, "kind"), "expected one of: schrodinger1d, synthetic");
  }
}

void parse_directions(Reader& r, const json& v, const std::string& path, std::vector<DirectionSpec>& out) {
  if (!v.is_array()) {
    r.fail(path, "expected an array");
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    const json& d = v[i];
    const std::string p = at(path, i);
    DirectionSpec spec;
    if (d.is_number_integer()) {
      spec.index = d.get<int>();
    } else if (d.is_array()) {
      spec.coefficients = r.numbers(d, p, true);
    } else if (d.is_object()) {
      r.only(d, p, {"index", "sign", "coefficients"});
      spec.index = r.integer(d, p, "index", false);
      if (const json* c = r.find(d, p, "coefficients", false)) spec.coefficients = r.numbers(*c, at(p, "coefficients"), true);
      if (auto s = r.number(d, p, "sign", false)) {
        if (*s != 1.0 && *s != -1.0) r.fail(at(p, "sign"), "must be 1 or -1");
        spec.sign = *s;
      }
      if (spec.index.has_value() == !spec.coefficients.empty()) r.fail(p, "give exactly one of index, coefficients");
    } else {
      r.fail(p, "expected an index, a coefficient array, or an object");
      continue;
    }
    if (spec.index && *spec.index < 0) r.fail(p, "index must be >= 0");
    out.push_back(std::move(spec));
  }
}

void parse_expectations(Reader& r, const json& v, const std::string& path, Expectations& e) {
  if (!r.object(v, path)) return;
  r.only(v, path, {"verdict", "dist_condition", "exit_code", "witness_verdict", "morse_difference", "scan_pass",
                   "lambda_final"});
  e.verdict = r.string(v, path, "verdict", false);
  e.dist_condition = r.string(v, path, "dist_condition", false);
  if (e.dist_condition && *e.dist_condition != "pass" && *e.dist_condition != "fail") {
    r.fail(at(path, "dist_condition"), "expected pass or fail");
  }
  e.exit_code = r.integer(v, path, "exit_code", false);
  e.witness_verdict = r.string(v, path, "witness_verdict", false);
  e.morse_difference = r.integer(v, path, "morse_difference", false);
  if (const json* s = r.find(v, path, "scan_pass", false)) {
    if (s->is_boolean()) {
      e.scan_pass = s->get<bool>();
    } else {
      r.fail(at(path, "scan_pass"), "expected a boolean");
    }
  }
  if (const json* lf = r.find(v, path, "lambda_final", false); lf && r.object(*lf, at(path, "lambda_final"))) {
    const std::string lp = at(path, "lambda_final");
    r.only(*lf, lp, {"value", "tol"});
    e.lambda_final = r.number(*lf, lp, "value", true);
    e.lambda_final_tol = r.positive(*lf, lp, "tol", true).value_or(0.0);
  }
}

}  // namespace

SchemaError::SchemaError(std::vector<SchemaIssue> issues)
    : std::runtime_error(join_issues(issues)), issues_(std::move(issues)) {}

Scenario parse_scenario(const json& doc) {
  Reader r;
  Scenario sc;
  sc.source = doc;
  if (!r.object(doc, "")) throw SchemaError(r.issues);
  r.only(doc, "", {"version", "name", "description", "operator", "nonlinearity", "lambda0", "band", "safety",
                   "norm_schedule", "directions", "verdict", "scan", "tolerances", "seed", "expectations"});

  if (auto v = r.integer(doc, "", "version", true)) {
    if (*v != 1) r.fail("/version", "unsupported version " + std::to_string(*v) + " (expected 1)");
    sc.version = *v;
  }
  sc.name = r.string(doc, "", "name", true).value_or("");
  if (!sc.name.empty()) {
    for (char c : sc.name) {
      if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
        r.fail("/name", "use letters, digits, '_' or '-' only");
        break;
      }
    }
  }
  if (const json* d = r.find(doc, "", "description", false); d && !d->is_string()) {
    r.fail("/description", "expected a string");
  }

  if (const json* op = r.find(doc, "", "operator", true)) parse_operator(r, *op, "/operator", sc.op);

  if (const json* nl = r.find(doc, "", "nonlinearity", true); nl && r.object(*nl, "/nonlinearity")) {
    r.only(*nl, "/nonlinearity", {"name", "params", "sign_mode"});
    sc.nonlinearity = r.string(*nl, "/nonlinearity", "name", true).value_or("");
    sc.nonlinearity_params = r.params(*nl, "/nonlinearity");
    sc.sign_mode = r.string(*nl, "/nonlinearity", "sign_mode", false);
    if (sc.sign_mode) {
      static const char* modes[] = {"none", "f5_nonneg", "f5_nonpos", "f6_nonneg", "f6_nonpos"};
      bool ok = false;
      for (const char* m : modes) ok = ok || *sc.sign_mode == m;
      if (!ok) r.fail("/nonlinearity/sign_mode", "expected none, f5_nonneg, f5_nonpos, f6_nonneg or f6_nonpos");
    }
    if (!sc.nonlinearity.empty()) {
      bool known = false;
      for (const auto& n : catalog::names()) known = known || n == sc.nonlinearity;
      if (!known) {
        r.fail("/nonlinearity/name", "unknown nonlinearity '" + sc.nonlinearity + "' (known: " + join(catalog::names()) + ")");
      } else {
        try {
          catalog::make(sc.nonlinearity, sc.nonlinearity_params);
        } catch (const Error& e) {
          r.fail("/nonlinearity/params", e.what());
        }
      }
    }
  }

  if (const json* l0 = r.find(doc, "", "lambda0", true)) {
    if (l0->is_number()) {
      sc.lambda0 = r.number(*l0, "/lambda0");
    } else if (l0->is_object()) {
      r.only(*l0, "/lambda0", {"auto", "probe"});
      const json* a = r.find(*l0, "/lambda0", "auto", true);
      if (a && !(a->is_boolean() && a->get<bool>())) r.fail("/lambda0/auto", "must be true");
      sc.lambda0_probe = r.number(*l0, "/lambda0", "probe", true).value_or(0.0);
    } else {
      r.fail("/lambda0", "expected a number or {\"auto\": true, \"probe\": x}");
    }
  }

  sc.band = r.positive(doc, "", "band", true).value_or(sc.band);
  if (auto s = r.number(doc, "", "safety", false)) {
    if (!(*s > 0.0 && *s < 1.0)) r.fail("/safety", "must lie in (0, 1)");
    sc.safety = *s;
  }
  if (const json* ns = r.find(doc, "", "norm_schedule", false)) {
    sc.norm_schedule = r.numbers(*ns, "/norm_schedule", true);
    for (std::size_t i = 0; i < sc.norm_schedule.size(); ++i) {
      if (i == 0 && sc.norm_schedule[0] < 1.0) r.fail("/norm_schedule/0", "first entry must be >= 1");
      if (i > 0 && !(sc.norm_schedule[i] > sc.norm_schedule[i - 1])) {
        r.fail(at("/norm_schedule", i), "schedule must be strictly increasing");
      }
    }
  }
  if (const json* d = r.find(doc, "", "directions", false)) parse_directions(r, *d, "/directions", sc.directions);

  if (const json* v = r.find(doc, "", "verdict", false); v && r.object(*v, "/verdict")) {
    r.only(*v, "/verdict", {"window", "slack", "min_points"});
    sc.verdict.window = r.positive(*v, "/verdict", "window", false).value_or(sc.verdict.window);
    sc.verdict.slack = r.positive(*v, "/verdict", "slack", false).value_or(sc.verdict.slack);
    sc.verdict.min_points = r.integer(*v, "/verdict", "min_points", false).value_or(sc.verdict.min_points);
    if (sc.verdict.min_points < 1) r.fail("/verdict/min_points", "must be >= 1");
  }
  if (const json* s = r.find(doc, "", "scan", false); s && r.object(*s, "/scan")) {
    r.only(*s, "/scan", {"lambda_points", "norm_min", "norm_max", "norm_points", "floor"});
    sc.scan.lambda_points = r.integer(*s, "/scan", "lambda_points", false).value_or(sc.scan.lambda_points);
    sc.scan.norm_min = r.positive(*s, "/scan", "norm_min", false).value_or(sc.scan.norm_min);
    sc.scan.norm_max = r.positive(*s, "/scan", "norm_max", false).value_or(sc.scan.norm_max);
    sc.scan.norm_points = r.integer(*s, "/scan", "norm_points", false).value_or(sc.scan.norm_points);
    sc.scan.floor = r.number(*s, "/scan", "floor", false).value_or(sc.scan.floor);
    if (sc.scan.lambda_points < 2) r.fail("/scan/lambda_points", "must be >= 2");
    if (sc.scan.norm_points < 1) r.fail("/scan/norm_points", "must be >= 1");
    if (sc.scan.norm_max < sc.scan.norm_min) r.fail("/scan/norm_max", "must be >= norm_min");
    if (sc.scan.floor < 0.0) r.fail("/scan/floor", "must be >= 0");
  }
  if (const json* t = r.find(doc, "", "tolerances", false); t && r.object(*t, "/tolerances")) {
    r.only(*t, "/tolerances", {"tol_w", "max_iterations"});
    sc.tol_w = r.positive(*t, "/tolerances", "tol_w", false);
    sc.max_iterations = r.integer(*t, "/tolerances", "max_iterations", false);
    if (sc.max_iterations && *sc.max_iterations < 1) r.fail("/tolerances/max_iterations", "must be >= 1");
  }
  if (const json* s = r.find(doc, "", "seed", false)) {
    if (s->is_number_unsigned()) {
      sc.seed = s->get<std::uint64_t>();
    } else {
      r.fail("/seed", "expected a non-negative integer");
    }
  }
  if (const json* e = r.find(doc, "", "expectations", false)) parse_expectations(r, *e, "/expectations", sc.expectations);

  if (!r.issues.empty()) throw SchemaError(r.issues);
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError({{"", "cannot open " + path}});
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError({{"", std::string("malformed JSON in ") + path + ": " + e.what()}});
  }
  return parse_scenario(doc);
}

}  // namespace asymbif::app
