#include "bvg/expr_json.hpp"

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"

namespace bvg {

using nlohmann::json;

namespace {

json args_json(const FunctionExpr& f) {
  json a = json::array();
  for (const auto& c : f.children()) a.push_back(to_json(c));
  return a;
}

std::vector<FunctionExpr> parse_args(const json& j, std::size_t expected) {
  if (!j.contains("args") || !j["args"].is_array()) throw ParseError("expression: missing 'args' array");
  std::vector<FunctionExpr> out;
  for (const auto& a : j["args"]) out.push_back(expr_from_json(a));
  if (expected != 0 && out.size() != expected)
    throw ParseError("expression: operator '" + j["op"].get<std::string>() + "' takes " +
                     std::to_string(expected) + " arguments, got " + std::to_string(out.size()));
  return out;
}

double number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number())
    throw ParseError(std::string("expression: missing numeric field '") + key + "'");
  return j[key].get<double>();
}

std::string text(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string())
    throw ParseError(std::string("expression: missing string field '") + key + "'");
  return j[key].get<std::string>();
}

}  // namespace

json to_json(const FunctionExpr& f) {
  json j;
  const auto p = f.params();
  switch (f.kind()) {
    case NodeKind::Atom:
      j["atom"] = f.name();
      j["params"] = json::object();
      for (const auto& [k, v] : f.param_map()) j["params"][k] = v;
      return j;
    case NodeKind::Combine:
      j["op"] = "combine";
      j["rule"] = std::string(to_string(*f.combine_rule()));
      j["alpha"] = p[0];
      break;
    case NodeKind::Dualize:
      j["op"] = "dualize";
      j["rule"] = std::string(to_string(*f.dual_rule()));
      break;
    case NodeKind::Schur:
      j["op"] = "schur";
      j["alpha"] = p[0];
      j["beta"] = p[1];
      break;
    case NodeKind::Complement:
      j["op"] = "complement";
      j["c"] = p[0];
      break;
    case NodeKind::Levy: {
      const LevyTriple& t = *f.levy();
      j["op"] = "levy";
      j["alpha"] = t.alpha;
      j["beta"] = t.beta;
      j["atoms"] = json::array();
      for (const auto& a : t.atoms) j["atoms"].push_back({a.location, a.mass});
      j["densities"] = args_json(f);
      return j;
    }
    default:
      j["op"] = std::string(to_string(f.kind()));
  }
  j["args"] = args_json(f);
  return j;
}

FunctionExpr expr_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("expression: expected a JSON object");
  if (j.contains("atom")) {
    ParamMap params;
    if (j.contains("params")) {
      if (!j["params"].is_object()) throw ParseError("expression: 'params' must be an object");
      for (const auto& [k, v] : j["params"].items()) {
        if (!v.is_number()) throw ParseError("expression: parameter '" + k + "' must be numeric");
        params[k] = v.get<double>();
      }
    }
    return catalog(text(j, "atom"), params);
  }
  const std::string op = text(j, "op");
  if (op == "sum") return sum(parse_args(j, 0));
  if (op == "product") return product(parse_args(j, 0));
  if (op == "compose") {
    auto a = parse_args(j, 2);
    return compose(a[0], a[1]);
  }
  if (op == "combine") {
    auto a = parse_args(j, 2);
    return combine(a[0], a[1], parse_combine_rule(text(j, "rule")), number(j, "alpha"));
  }
  if (op == "dualize") {
    auto a = parse_args(j, 1);
    return dualize(a[0], parse_dual_rule(text(j, "rule")));
  }
  if (op == "uchiyama") {
    auto a = parse_args(j, 3);
    return uchiyama(a[0], a[1], a[2]);
  }
  if (op == "schur") {
    auto a = parse_args(j, 2);
    return schur(a[0], a[1], number(j, "alpha"), number(j, "beta"));
  }
  if (op == "complement") {
    auto a = parse_args(j, 1);
    return complement(number(j, "c"), a[0]);
  }
  if (op == "spectral") {
    auto a = parse_args(j, 1);
    return spectral(a[0]);
  }
  if (op == "levy") {
    LevyTriple t;
    t.alpha = j.contains("alpha") ? number(j, "alpha") : 0.0;
    t.beta = j.contains("beta") ? number(j, "beta") : 0.0;
    if (j.contains("atoms")) {
      for (const auto& a : j["atoms"]) {
        if (!a.is_array() || a.size() != 2 || !a[0].is_number() || !a[1].is_number())
          throw ParseError("expression: Levy atoms must be [location, mass] pairs");
        t.atoms.push_back({a[0].get<double>(), a[1].get<double>()});
      }
    }
    if (j.contains("densities")) {
      if (!j["densities"].is_array()) throw ParseError("expression: 'densities' must be an array");
      for (const auto& d : j["densities"]) t.densities.push_back(expr_from_json(d));
    }
    return levy_function(std::move(t));
  }
  throw ParseError("expression: unknown operator '" + op + "'");
}

}  // namespace bvg
