#include "bvg/function_expr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "bvg/catalog.hpp"
#include "bvg/errors.hpp"
#include "bvg/levy.hpp"

namespace bvg {

struct FunctionExpr::Node {
  NodeKind kind = NodeKind::Atom;
  const AtomSpec* atom = nullptr;
  std::vector<double> params;
  int rule = 0;
  std::vector<FunctionExpr> children;
  TagSet tags;
  std::optional<LevyTriple> levy;
};

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Probe points for removable singularities at 0.
constexpr double kZeroProbe = 1e-150;
constexpr double kZeroProbeFine = 1e-160;

using Node = FunctionExpr::Node;

FunctionExpr make(Node node) {
  return FunctionExpr(std::make_shared<const Node>(std::move(node)));
}

std::vector<TagSet> child_tags(const std::vector<FunctionExpr>& children) {
  std::vector<TagSet> out;
  out.reserve(children.size());
  for (const auto& c : children) out.push_back(c.tags());
  return out;
}

FunctionExpr make_op(NodeKind kind, int rule, std::vector<double> params,
                     std::vector<FunctionExpr> children) {
  Node n;
  n.kind = kind;
  n.rule = rule;
  n.params = std::move(params);
  n.children = std::move(children);
  const auto ct = child_tags(n.children);
  n.tags = infer_tags(kind, rule, n.params, ct);
  return make(std::move(n));
}

double eval_node(const Node& n, double x);

double eval_child(const FunctionExpr& f, double x) { return eval_node(f.node(), x); }

double eval_raw(const Node& n, double x) {
  switch (n.kind) {
    case NodeKind::Atom:
      return x == 0.0 ? n.atom->at_zero(n.params) : n.atom->eval(n.params, x);
    case NodeKind::Sum: {
      double acc = 0.0;
      for (const auto& c : n.children) acc += eval_child(c, x);
      return acc;
    }
    case NodeKind::Product: {
      double acc = 1.0;
      for (const auto& c : n.children) acc *= eval_child(c, x);
      return acc;
    }
    case NodeKind::Compose: {
      const double inner = eval_child(n.children[1], x);
      if (inner < 0.0) throw DomainError("compose: inner function is negative at x=" + std::to_string(x));
      return eval_child(n.children[0], inner);
    }
    case NodeKind::Combine: {
      const double a = n.params[0];
      const auto& f = n.children[0];
      const auto& g = n.children[1];
      switch (static_cast<CombineRule>(n.rule)) {
        case CombineRule::PowerMean: {
          const double fv = eval_child(f, x);
          const double gv = eval_child(g, x);
          if (fv < 0.0 || gv < 0.0) throw DomainError("power_mean: negative operand");
          if (a < 0.0 && (fv == 0.0 || gv == 0.0)) return 0.0;
          return std::pow(std::pow(fv, a) + std::pow(gv, a), 1.0 / a);
        }
        case CombineRule::ArgPowerMean: {
          const double y = std::pow(x, a);
          return std::pow(eval_child(f, y) + eval_child(g, y), 1.0 / a);
        }
        case CombineRule::SplitPower:
          return eval_child(f, std::pow(x, a)) * eval_child(g, std::pow(x, 1.0 - a));
        case CombineRule::Geometric:
          return std::pow(eval_child(f, x), a) * std::pow(eval_child(g, x), 1.0 - a);
      }
      return kNaN;
    }
    case NodeKind::Dualize: {
      const double fv = eval_child(n.children[0], x);
      switch (static_cast<DualRule>(n.rule)) {
        case DualRule::XOverF:
          return x / fv;
        case DualRule::FOverX:
          return fv / x;
        case DualRule::Reciprocal:
          return 1.0 / fv;
      }
      return kNaN;
    }
    case NodeKind::Uchiyama: {
      const double fv = eval_child(n.children[1], x);
      return eval_child(n.children[0], fv) * eval_child(n.children[2], x / fv);
    }
    case NodeKind::Schur:
      return eval_child(n.children[0], std::pow(x, n.params[0])) *
             eval_child(n.children[1], std::pow(x, n.params[1]));
    case NodeKind::Complement:
      return n.params[0] - eval_child(n.children[0], x);
    case NodeKind::Levy:
      return levy_eval(*n.levy, x);
    case NodeKind::Spectral:
      return spectral_eval(*n.children[0].levy(), x);
  }
  return kNaN;
}

double eval_node(const Node& n, double x) {
  if (std::isnan(x)) return kNaN;
  if (x < 0.0) throw DomainError("argument must be nonnegative");
  const double v = eval_raw(n, x);
  if (x != 0.0 || std::isfinite(v)) return v;
  // Removable singularity: accept the value at tiny x if it has settled.
  const double v1 = eval_raw(n, kZeroProbe);
  const double v2 = eval_raw(n, kZeroProbeFine);
  if (std::isfinite(v1) && std::isfinite(v2) &&
      std::abs(v1 - v2) <= 1e-6 * std::max(1.0, std::abs(v1)))
    return v2;
  return v;
}

std::optional<LevyTriple> sum_levy(const std::vector<FunctionExpr>& terms) {
  LevyTriple acc;
  for (const auto& t : terms) {
    const LevyTriple* l = t.levy();
    if (l == nullptr) return std::nullopt;
    acc.alpha += l->alpha;
    acc.beta += l->beta;
    acc.atoms.insert(acc.atoms.end(), l->atoms.begin(), l->atoms.end());
    acc.densities.insert(acc.densities.end(), l->densities.begin(), l->densities.end());
  }
  return acc;
}

void require_nonzero(const FunctionExpr& f, const char* op) {
  if (identically_zero(f))
    throw DomainError(std::string(op) + ": argument vanishes identically");
}

}  // namespace

// -- names -------------------------------------------------------------------

std::string_view to_string(NodeKind kind) {
  switch (kind) {
    case NodeKind::Atom: return "atom";
    case NodeKind::Sum: return "sum";
    case NodeKind::Product: return "product";
    case NodeKind::Compose: return "compose";
    case NodeKind::Combine: return "combine";
    case NodeKind::Dualize: return "dualize";
    case NodeKind::Uchiyama: return "uchiyama";
    case NodeKind::Schur: return "schur";
    case NodeKind::Complement: return "complement";
    case NodeKind::Levy: return "levy";
    case NodeKind::Spectral: return "spectral";
  }
  return "?";
}

std::string_view to_string(CombineRule rule) {
  switch (rule) {
    case CombineRule::PowerMean: return "power_mean";
    case CombineRule::ArgPowerMean: return "arg_power_mean";
    case CombineRule::SplitPower: return "split_power";
    case CombineRule::Geometric: return "geometric";
  }
  return "?";
}

std::string_view to_string(DualRule rule) {
  switch (rule) {
    case DualRule::XOverF: return "x_over_f";
    case DualRule::FOverX: return "f_over_x";
    case DualRule::Reciprocal: return "reciprocal";
  }
  return "?";
}

CombineRule parse_combine_rule(std::string_view name) {
  for (auto r : {CombineRule::PowerMean, CombineRule::ArgPowerMean, CombineRule::SplitPower,
                 CombineRule::Geometric})
    if (to_string(r) == name) return r;
  throw DomainError("unknown combine rule '" + std::string(name) + "'");
}

DualRule parse_dual_rule(std::string_view name) {
  for (auto r : {DualRule::XOverF, DualRule::FOverX, DualRule::Reciprocal})
    if (to_string(r) == name) return r;
  throw DomainError("unknown dualize rule '" + std::string(name) + "'");
}

std::string_view to_string(ClassTag tag) {
  switch (tag) {
    case ClassTag::CM: return "CM";
    case ClassTag::BF: return "BF";
    case ClassTag::CBF: return "CBF";
    case ClassTag::S: return "S";
  }
  return "?";
}

std::optional<ClassTag> parse_tag(std::string_view name) {
  for (ClassTag t : kAllTags)
    if (to_string(t) == name) return t;
  return std::nullopt;
}

std::vector<ClassTag> TagSet::list() const {
  std::vector<ClassTag> out;
  for (ClassTag t : kAllTags)
    if (has(t)) out.push_back(t);
  return out;
}

std::string TagSet::str() const {
  std::string s = "{";
  bool first = true;
  for (ClassTag t : list()) {
    if (!first) s += ",";
    s += to_string(t);
    first = false;
  }
  return s + "}";
}

// -- FunctionExpr accessors ----------------------------------------------------

FunctionExpr::FunctionExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

NodeKind FunctionExpr::kind() const { return node_->kind; }

std::string FunctionExpr::name() const {
  if (node_->kind == NodeKind::Atom) return node_->atom->name;
  return std::string(to_string(node_->kind));
}

const AtomSpec* FunctionExpr::atom() const { return node_->atom; }
std::span<const double> FunctionExpr::params() const { return node_->params; }

ParamMap FunctionExpr::param_map() const {
  ParamMap out;
  if (node_->kind != NodeKind::Atom) return out;
  for (std::size_t i = 0; i < node_->params.size(); ++i)
    out[node_->atom->params[i].name] = node_->params[i];
  return out;
}

std::span<const FunctionExpr> FunctionExpr::children() const { return node_->children; }
TagSet FunctionExpr::tags() const { return node_->tags; }
const LevyTriple* FunctionExpr::levy() const { return node_->levy ? &*node_->levy : nullptr; }

std::optional<CombineRule> FunctionExpr::combine_rule() const {
  if (node_->kind != NodeKind::Combine) return std::nullopt;
  return static_cast<CombineRule>(node_->rule);
}

std::optional<DualRule> FunctionExpr::dual_rule() const {
  if (node_->kind != NodeKind::Dualize) return std::nullopt;
  return static_cast<DualRule>(node_->rule);
}

double FunctionExpr::operator()(double x) const { return eval(*this, x); }

std::string FunctionExpr::str() const {
  std::ostringstream os;
  const Node& n = *node_;
  auto args = [&] {
    for (std::size_t i = 0; i < n.children.size(); ++i) {
      if (i) os << ", ";
      os << n.children[i].str();
    }
  };
  switch (n.kind) {
    case NodeKind::Atom: {
      os << n.atom->name;
      if (!n.params.empty()) {
        os << "(";
        for (std::size_t i = 0; i < n.params.size(); ++i) {
          if (i) os << ", ";
          os << n.atom->params[i].name << "=" << n.params[i];
        }
        os << ")";
      }
      break;
    }
    case NodeKind::Combine:
      os << "combine[" << to_string(static_cast<CombineRule>(n.rule)) << ", alpha=" << n.params[0] << "](";
      args();
      os << ")";
      break;
    case NodeKind::Dualize:
      os << "dualize[" << to_string(static_cast<DualRule>(n.rule)) << "](";
      args();
      os << ")";
      break;
    case NodeKind::Schur:
      os << "schur[alpha=" << n.params[0] << ", beta=" << n.params[1] << "](";
      args();
      os << ")";
      break;
    case NodeKind::Complement:
      os << n.params[0] << " - ";
      args();
      break;
    case NodeKind::Levy:
      os << "levy[alpha=" << n.levy->alpha << ", beta=" << n.levy->beta
         << ", atoms=" << n.levy->atoms.size() << ", densities=" << n.levy->densities.size() << "]";
      break;
    default:
      os << to_string(n.kind) << "(";
      args();
      os << ")";
  }
  return os.str();
}

// -- construction ---------------------------------------------------------------

FunctionExpr catalog(std::string_view name, const ParamMap& params) {
  const AtomSpec* spec = find_atom(name);
  if (spec == nullptr) throw DomainError("unknown atom '" + std::string(name) + "'");
  for (const auto& [key, _] : params) {
    const bool known = std::any_of(spec->params.begin(), spec->params.end(),
                                   [&](const ParamSpec& p) { return p.name == key; });
    if (!known) throw DomainError("atom '" + spec->name + "' has no parameter '" + key + "'");
  }
  Node n;
  n.kind = NodeKind::Atom;
  n.atom = spec;
  for (const auto& p : spec->params) {
    auto it = params.find(p.name);
    const double v = it == params.end() ? p.default_value : it->second;
    if (!p.admits(v)) {
      std::ostringstream os;
      os << "atom '" << spec->name << "': parameter " << p.name << "=" << v << " outside "
         << p.range_str();
      throw DomainError(os.str());
    }
    n.params.push_back(v);
  }
  n.tags = spec->tags(n.params);
  if (spec->levy) n.levy = spec->levy(n.params);
  return make(std::move(n));
}

FunctionExpr sum(std::vector<FunctionExpr> terms) {
  if (terms.empty()) throw DomainError("sum: no terms");
  auto levy = sum_levy(terms);
  auto out = make_op(NodeKind::Sum, 0, {}, std::move(terms));
  if (!levy) return out;
  Node n = out.node();
  n.levy = std::move(levy);
  return make(std::move(n));
}

FunctionExpr product(std::vector<FunctionExpr> factors) {
  if (factors.empty()) throw DomainError("product: no factors");
  return make_op(NodeKind::Product, 0, {}, std::move(factors));
}

FunctionExpr compose(const FunctionExpr& f, const FunctionExpr& g) {
  return make_op(NodeKind::Compose, 0, {}, {f, g});
}

FunctionExpr combine(const FunctionExpr& f, const FunctionExpr& g, CombineRule rule, double alpha) {
  if (!std::isfinite(alpha)) throw DomainError("combine: alpha must be finite");
  switch (rule) {
    case CombineRule::PowerMean:
    case CombineRule::ArgPowerMean:
      if (alpha < -1.0 || alpha > 1.0 || alpha == 0.0)
        throw DomainError("combine[" + std::string(to_string(rule)) +
                          "]: alpha must lie in [-1,1] \\ {0}");
      break;
    case CombineRule::SplitPower:
    case CombineRule::Geometric:
      if (alpha < 0.0 || alpha > 1.0)
        throw DomainError("combine[" + std::string(to_string(rule)) + "]: alpha must lie in [0,1]");
      break;
  }
  return make_op(NodeKind::Combine, static_cast<int>(rule), {alpha}, {f, g});
}

FunctionExpr uchiyama(const FunctionExpr& h, const FunctionExpr& f, const FunctionExpr& g) {
  require_nonzero(f, "uchiyama");
  return make_op(NodeKind::Uchiyama, 0, {}, {h, f, g});
}

FunctionExpr dualize(const FunctionExpr& f, DualRule rule) {
  require_nonzero(f, "dualize");
  return make_op(NodeKind::Dualize, static_cast<int>(rule), {}, {f});
}

FunctionExpr schur(const FunctionExpr& g1, const FunctionExpr& g2, double alpha, double beta) {
  if (!(alpha >= 0.0) || !(beta >= 0.0) || !std::isfinite(alpha) || !std::isfinite(beta))
    throw DomainError("schur: exponents must be finite and nonnegative");
  return make_op(NodeKind::Schur, 0, {alpha, beta}, {g1, g2});
}

FunctionExpr complement(double c, const FunctionExpr& f) {
  if (!std::isfinite(c)) throw DomainError("complement: constant must be finite");
  return make_op(NodeKind::Complement, 0, {c}, {f});
}

FunctionExpr levy_function(LevyTriple triple) {
  validate_levy(triple);
  std::vector<double> params{triple.alpha, triple.beta};
  for (const auto& a : triple.atoms) {
    params.push_back(a.location);
    params.push_back(a.mass);
  }
  auto out = make_op(NodeKind::Levy, triple.atoms.empty() ? 0 : 1, std::move(params), triple.densities);
  Node n = out.node();
  n.levy = std::move(triple);
  return make(std::move(n));
}

FunctionExpr spectral(const FunctionExpr& f) {
  if (f.levy() == nullptr) throw DomainError("spectral: expression carries no Levy triple");
  return make_op(NodeKind::Spectral, 0, {}, {f});
}

// -- class inference -------------------------------------------------------------

TagSet infer_tags(NodeKind kind, int rule, std::span<const double> params,
                  std::span<const TagSet> child_tags) {
  TagSet out;
  auto all = [&](ClassTag t) {
    return !child_tags.empty() &&
           std::all_of(child_tags.begin(), child_tags.end(), [t](TagSet s) { return s.has(t); });
  };
  switch (kind) {
    case NodeKind::Atom:
    case NodeKind::Complement:
    case NodeKind::Spectral:
      break;
    case NodeKind::Sum:
      for (ClassTag t : kAllTags)
        if (all(t)) out.add(t);
      break;
    case NodeKind::Product:
      if (all(ClassTag::CM)) out.add(ClassTag::CM);
      break;
    case NodeKind::Compose: {
      const TagSet f = child_tags[0];
      const TagSet g = child_tags[1];
      if (g.has(ClassTag::BF)) {
        if (f.has(ClassTag::CM)) out.add(ClassTag::CM);
        if (f.has(ClassTag::BF)) out.add(ClassTag::BF);
      }
      if (f.has(ClassTag::CBF) && g.has(ClassTag::CBF)) out.add(ClassTag::CBF);
      if (f.has(ClassTag::S) && g.has(ClassTag::S)) out.add(ClassTag::CBF);
      // A Stieltjes function maps the upper half plane to the lower one and a
      // CBF preserves both, so the mixed compositions are Stieltjes.
      if ((f.has(ClassTag::CBF) && g.has(ClassTag::S)) || (f.has(ClassTag::S) && g.has(ClassTag::CBF)))
        out.add(ClassTag::S);
      break;
    }
    case NodeKind::Combine:
    case NodeKind::Uchiyama:
      if (all(ClassTag::CBF)) out.add(ClassTag::CBF);
      break;
    case NodeKind::Dualize: {
      const TagSet f = child_tags[0];
      const auto r = static_cast<DualRule>(rule);
      if (f.has(ClassTag::CBF)) out.add(r == DualRule::XOverF ? ClassTag::CBF : ClassTag::S);
      if (f.has(ClassTag::S) && r == DualRule::Reciprocal) out.add(ClassTag::CBF);
      break;
    }
    case NodeKind::Schur: {
      const double a = params[0];
      const double b = params[1];
      if (all(ClassTag::BF) && a >= 0.0 && a <= 1.0 && b >= 0.0 && b <= 1.0 && a + b <= 1.0)
        out.add(ClassTag::BF);
      break;
    }
    case NodeKind::Levy:
      out.add(ClassTag::BF);
      if (rule == 0 && std::all_of(child_tags.begin(), child_tags.end(),
                                   [](TagSet s) { return s.has(ClassTag::CM); }))
        out.add(ClassTag::CBF);
      break;
  }
  return out;
}

TagSet infer_class(const FunctionExpr& f) {
  const Node& n = f.node();
  if (n.kind == NodeKind::Atom) return n.atom->tags(n.params);
  std::vector<TagSet> ct;
  for (const auto& c : n.children) ct.push_back(infer_class(c));
  return infer_tags(n.kind, n.rule, n.params, ct);
}

// -- evaluation ---------------------------------------------------------------------

double eval(const FunctionExpr& f, double x) {
  if (!std::isfinite(x) || x < 0.0)
    throw DomainError("eval: argument must be finite and nonnegative");
  const double v = eval_node(f.node(), x);
  if (std::isnan(v)) {
    if (x == 0.0) throw DomainError("eval: " + f.str() + " has no finite limit at 0");
    throw DomainError("eval: " + f.str() + " undefined at x=" + std::to_string(x));
  }
  if (std::isinf(v)) {
    if (x == 0.0) throw DomainError("eval: " + f.str() + " diverges at 0");
    throw NumericalError("eval: overflow in " + f.str() + " at x=" + std::to_string(x));
  }
  return v;
}

std::optional<std::complex<double>> eval_complex(const FunctionExpr& f, std::complex<double> z) {
  using C = std::complex<double>;
  const Node& n = f.node();
  auto child = [&](std::size_t i, C w) { return eval_complex(n.children[i], w); };
  switch (n.kind) {
    case NodeKind::Atom:
      if (!n.atom->eval_complex) return std::nullopt;
      return n.atom->eval_complex(n.params, z);
    case NodeKind::Sum: {
      C acc = 0.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        auto v = child(i, z);
        if (!v) return std::nullopt;
        acc += *v;
      }
      return acc;
    }
    case NodeKind::Product: {
      C acc = 1.0;
      for (std::size_t i = 0; i < n.children.size(); ++i) {
        auto v = child(i, z);
        if (!v) return std::nullopt;
        acc *= *v;
      }
      return acc;
    }
    case NodeKind::Compose: {
      auto inner = child(1, z);
      if (!inner) return std::nullopt;
      return child(0, *inner);
    }
    case NodeKind::Complement: {
      auto v = child(0, z);
      if (!v) return std::nullopt;
      return n.params[0] - *v;
    }
    case NodeKind::Dualize: {
      auto v = child(0, z);
      if (!v) return std::nullopt;
      switch (static_cast<DualRule>(n.rule)) {
        case DualRule::XOverF: return z / *v;
        case DualRule::FOverX: return *v / z;
        case DualRule::Reciprocal: return 1.0 / *v;
      }
      return std::nullopt;
    }
    default:
      return std::nullopt;
  }
}

bool identically_zero(const FunctionExpr& f) {
  for (int i = 0; i <= 24; ++i) {
    const double x = std::pow(10.0, -6.0 + 0.5 * i);
    try {
      if (eval(f, x) != 0.0) return false;
    } catch (const std::exception&) {
      return false;
    }
  }
  return true;
}

}  // namespace bvg
