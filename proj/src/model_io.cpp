#include "bvg/model_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "bvg/errors.hpp"
#include "bvg/expr_json.hpp"

namespace bvg {

namespace {

using json = nlohmann::json;

json matrix_json(const Mat& a) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < a.cols(); ++j) row.push_back(a(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Mat matrix_from(const json& j, int d) {
  if (j.is_null()) return Mat::Identity(d, d);
  if (!j.is_array() || static_cast<int>(j.size()) != d)
    throw ParseError("\"A\" must be a " + std::to_string(d) + "x" + std::to_string(d) + " array");
  Mat a(d, d);
  for (int i = 0; i < d; ++i) {
    if (!j[i].is_array() || static_cast<int>(j[i].size()) != d)
      throw ParseError("\"A\" row " + std::to_string(i) + " has the wrong length");
    for (int k = 0; k < d; ++k) a(i, k) = j[i][k].get<double>();
  }
  return a;
}

Vec vec_from(const json& j) {
  if (!j.is_array()) throw ParseError("expected a numeric array");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) && !j.at(key).is_null() ? field<T>(j, key) : fallback;
}

std::vector<std::string> notes_from(const json& j) {
  return field_or<std::vector<std::string>>(j, "notes", {});
}

json optional_num(const std::optional<double>& v) {
  return v && std::isfinite(*v) ? json(*v) : json(nullptr);
}

int dim_of(const json& recipe) { return field_or<int>(recipe, "d", 1); }

Mat matrix_of(const json& recipe, int d) {
  return matrix_from(recipe.contains("A") ? recipe.at("A") : json(nullptr), d);
}

Model wrap(Variogram v) {
  Model m;
  m.kind = ModelKind::Variogram;
  m.variogram = std::move(v);
  return m;
}

Model wrap(StationaryCovariance c) {
  Model m;
  m.kind = ModelKind::Covariance;
  m.covariance = std::move(c);
  return m;
}

Variogram base_variogram(const json& recipe) {
  if (!recipe.contains("base")) throw ParseError("missing field \"base\"");
  const json& b = recipe.at("base");
  const Model m = b.contains("constructor") ? construct(b) : model_from_json(b);
  return m.as_variogram();
}

}  // namespace

std::string_view to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::Variogram: return "variogram";
    case ModelKind::Covariance: return "covariance";
    case ModelKind::DifferenceKernel: return "difference_kernel";
    case ModelKind::SumKernel: return "sum_kernel";
  }
  return "?";
}

int Model::dim() const {
  if (covariance) return covariance->d;
  return variogram->d;
}

bool Model::certified() const {
  if (covariance) return covariance->certified;
  return variogram->certified;
}

Kernel Model::kernel() const {
  switch (kind) {
    case ModelKind::Variogram: return variogram->kernel();
    case ModelKind::Covariance: return covariance->kernel();
    case ModelKind::DifferenceKernel: return difference_kernel(variogram->kernel(), eta);
    case ModelKind::SumKernel: return sum_kernel(variogram->kernel(), eta);
  }
  throw DomainError("model has no kernel");
}

Variogram Model::as_variogram() const {
  if (kind == ModelKind::Variogram) return *variogram;
  if (kind == ModelKind::Covariance) return variogram_from_covariance(*covariance);
  throw DomainError(std::string(to_string(kind)) + " is not a variogram model");
}

json to_json(const Variogram& v) {
  return {{"kind", "variogram"},
          {"profile", to_json(v.profile)},
          {"mode", to_string(v.mode)},
          {"A", matrix_json(v.A)},
          {"d", v.d},
          {"certified", v.certified},
          {"max_dim", v.max_dim ? json(*v.max_dim) : json(nullptr)},
          {"construction", v.construction},
          {"notes", v.notes},
          {"sill", optional_num(v.sill)},
          {"support_radius", optional_num(v.support_radius)}};
}

json to_json(const StationaryCovariance& c) {
  return {{"kind", "covariance"},
          {"profile", to_json(c.profile)},
          {"mode", to_string(c.mode)},
          {"A", matrix_json(c.A)},
          {"d", c.d},
          {"certified", c.certified},
          {"max_dim", c.max_dim ? json(*c.max_dim) : json(nullptr)},
          {"construction", c.construction},
          {"notes", c.notes},
          {"sill", c.sill},
          {"support_radius", optional_num(c.support_radius)}};
}

json to_json(const Model& m) {
  switch (m.kind) {
    case ModelKind::Variogram: return to_json(*m.variogram);
    case ModelKind::Covariance: return to_json(*m.covariance);
    default: break;
  }
  return {{"kind", to_string(m.kind)},
          {"base", to_json(*m.variogram)},
          {"eta", std::vector<double>(m.eta.data(), m.eta.data() + m.eta.size())},
          {"d", m.variogram->d},
          {"certified", m.variogram->certified}};
}

Variogram variogram_from_json(const json& j) {
  Variogram v{.profile = expr_from_json(field<json>(j, "profile")), .d = field<int>(j, "d")};
  if (v.d < 1) throw ParseError("\"d\" must be positive");
  v.mode = parse_argument_mode(field_or<std::string>(j, "mode", "squared_norm"));
  v.A = matrix_from(j.contains("A") ? j.at("A") : json(nullptr), v.d);
  v.certified = field_or<bool>(j, "certified", false);
  if (j.contains("max_dim") && !j.at("max_dim").is_null()) v.max_dim = field<int>(j, "max_dim");
  v.construction = field_or<std::string>(j, "construction", "");
  v.notes = notes_from(j);
  if (j.contains("sill") && !j.at("sill").is_null()) v.sill = field<double>(j, "sill");
  if (j.contains("support_radius") && !j.at("support_radius").is_null())
    v.support_radius = field<double>(j, "support_radius");
  return v;
}

StationaryCovariance covariance_from_json(const json& j) {
  StationaryCovariance c{.profile = expr_from_json(field<json>(j, "profile")), .d = field<int>(j, "d")};
  if (c.d < 1) throw ParseError("\"d\" must be positive");
  c.mode = parse_argument_mode(field_or<std::string>(j, "mode", "norm"));
  c.A = matrix_from(j.contains("A") ? j.at("A") : json(nullptr), c.d);
  c.certified = field_or<bool>(j, "certified", false);
  if (j.contains("max_dim") && !j.at("max_dim").is_null()) c.max_dim = field<int>(j, "max_dim");
  c.construction = field_or<std::string>(j, "construction", "");
  c.notes = notes_from(j);
  c.sill = field_or<double>(j, "sill", eval(c.profile, 0.0));
  c.support_radius =
      field_or<double>(j, "support_radius", std::numeric_limits<double>::infinity());
  return c;
}

Model model_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("model must be a JSON object");
  if (j.contains("constructor")) return construct(j);
  const std::string kind = field_or<std::string>(j, "kind", "variogram");
  if (kind == "variogram") return wrap(variogram_from_json(j));
  if (kind == "covariance") return wrap(covariance_from_json(j));
  if (kind == "difference_kernel" || kind == "sum_kernel") {
    Model m;
    m.kind = kind == "sum_kernel" ? ModelKind::SumKernel : ModelKind::DifferenceKernel;
    m.variogram = base_variogram(j);
    m.eta = vec_from(field<json>(j, "eta"));
    if (m.eta.size() != m.variogram->d) throw ParseError("\"eta\" has the wrong dimension");
    return m;
  }
  throw ParseError("unknown model kind '" + kind + "'");
}

Model construct(const json& recipe) {
  if (!recipe.is_object()) throw ParseError("recipe must be a JSON object");
  const auto name = field<std::string>(recipe, "constructor");
  const int d = dim_of(recipe);
  const auto expr = [&](const char* key) { return expr_from_json(field<json>(recipe, key)); };

  if (name == "make_variogram")
    return wrap(make_variogram(expr("profile"), matrix_of(recipe, d), d,
                               parse_argument_mode(field_or<std::string>(recipe, "mode", "squared_norm"))));
  if (name == "ma_product")
    return wrap(ma_product(field<double>(recipe, "a1"), field<double>(recipe, "a2"),
                           matrix_of(recipe, d), d));
  if (name == "schur_product_extended")
    return wrap(schur_product_extended(expr("g1"), expr("g2"), field<double>(recipe, "alpha"),
                                       field<double>(recipe, "beta"), matrix_of(recipe, d), d,
                                       field_or<bool>(recipe, "allow_unverified", false)));
  if (name == "cbf_variograms")
    return wrap(cbf_variograms(expr("g"), parse_cbf_variogram(field<std::string>(recipe, "which")), d));
  if (name == "composition_products") {
    std::optional<FunctionExpr> g3;
    if (recipe.contains("g3")) g3 = expr("g3");
    return wrap(composition_products(
        expr("g1"), expr("g2"), g3,
        parse_composition_product(field_or<std::string>(recipe, "which", "two_factor")), d));
  }
  if (name == "wendland")
    return wrap(wendland(field<double>(recipe, "r"), field<int>(recipe, "l"), d));
  if (name == "spherical") return wrap(spherical(field_or<double>(recipe, "range", 1.0), d));
  if (name == "spherical_covariance")
    return wrap(spherical_covariance(field_or<double>(recipe, "range", 1.0), d));
  if (name == "exponential_covariance")
    return wrap(exponential_covariance(field_or<double>(recipe, "scale", 1.0), d));
  if (name == "cosine_covariance") return wrap(cosine_covariance(field_or<double>(recipe, "omega", 1.0)));
  if (name == "nugget") return wrap(nugget_covariance(d));
  if (name == "variogram_from_covariance") {
    const json& c = recipe.at("covariance");
    const Model m = c.contains("constructor") ? construct(c) : model_from_json(c);
    if (!m.covariance) throw ParseError("\"covariance\" is not a covariance model");
    return wrap(variogram_from_covariance(*m.covariance));
  }
  if (name == "spectral_variogram") return wrap(spectral_variogram(expr("f")));
  if (name == "difference_kernel" || name == "sum_kernel") {
    Model m;
    m.kind = name == "sum_kernel" ? ModelKind::SumKernel : ModelKind::DifferenceKernel;
    m.variogram = base_variogram(recipe);
    m.eta = vec_from(field<json>(recipe, "eta"));
    if (m.eta.size() != m.variogram->d) throw ParseError("\"eta\" has the wrong dimension");
    return m;
  }
  throw ParseError("unknown constructor '" + name + "'");
}

json load_json(const std::string& text_or_path) {
  const auto first = text_or_path.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && (text_or_path[first] == '{' || text_or_path[first] == '[')) {
    try {
      return json::parse(text_or_path);
    } catch (const json::exception& e) {
      throw ParseError(std::string("inline JSON: ") + e.what());
    }
  }
  std::ifstream in(text_or_path);
  if (!in) throw ParseError("cannot open '" + text_or_path + "'");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(text_or_path + ": " + e.what());
  }
}

}  // namespace bvg
