#pragma once

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "bvg/tags.hpp"

namespace bvg {

struct AtomSpec;
struct LevyTriple;

using ParamMap = std::map<std::string, double>;

enum class NodeKind {
  Atom,
  Sum,
  Product,
  Compose,
  Combine,
  Dualize,
  Uchiyama,
  Schur,
  Complement,
  Levy,
  Spectral,
};

/// Two-argument CBF-preserving combinators.
///   power_mean:     (f^a + g^a)^(1/a),         a in [-1,1] \ {0}
///   arg_power_mean: (f(x^a) + g(x^a))^(1/a),   a in [-1,1] \ {0}
///   split_power:    f(x^a) * g(x^(1-a)),       a in [0,1]
///   geometric:      f^a * g^(1-a),             a in [0,1]
enum class CombineRule { PowerMean, ArgPowerMean, SplitPower, Geometric };

/// x / f(x), f(x) / x and 1 / f(x).
enum class DualRule { XOverF, FOverX, Reciprocal };

std::string_view to_string(NodeKind kind);
std::string_view to_string(CombineRule rule);
std::string_view to_string(DualRule rule);
CombineRule parse_combine_rule(std::string_view name);
DualRule parse_dual_rule(std::string_view name);

/// Immutable expression tree over functions on [0, inf) carrying class tags.
///
/// Tags are computed once at construction from the children's tags and the
/// closure rules in infer_tags(); nothing else ever adds a tag. Copies share
/// the underlying node.
class FunctionExpr {
 public:
  struct Node;

  [[nodiscard]] NodeKind kind() const;
  /// Atom name for catalog atoms, operator name otherwise.
  [[nodiscard]] std::string name() const;
  [[nodiscard]] const AtomSpec* atom() const;
  /// Atom parameters in catalog order, or operator scalars (alpha, beta, c).
  [[nodiscard]] std::span<const double> params() const;
  [[nodiscard]] ParamMap param_map() const;
  [[nodiscard]] std::span<const FunctionExpr> children() const;
  [[nodiscard]] TagSet tags() const;
  [[nodiscard]] bool has(ClassTag tag) const { return tags().has(tag); }
  [[nodiscard]] const LevyTriple* levy() const;
  [[nodiscard]] std::optional<CombineRule> combine_rule() const;
  [[nodiscard]] std::optional<DualRule> dual_rule() const;

  double operator()(double x) const;

  /// Human-readable infix rendering, for reports and diagnostics.
  [[nodiscard]] std::string str() const;

  explicit FunctionExpr(std::shared_ptr<const Node> node);
  [[nodiscard]] const Node& node() const { return *node_; }

 private:
  std::shared_ptr<const Node> node_;
};

struct LevyAtom {
  double location = 0.0;  // t_i > 0
  double mass = 0.0;      // >= 0
};

/// f(x) = alpha x + beta + int_(0,inf) (1 - exp(-x t)) nu(dt) with nu a sum of
/// point masses and densities m(t) dt.
struct LevyTriple {
  double alpha = 0.0;  // drift
  double beta = 0.0;   // constant term
  std::vector<LevyAtom> atoms;
  std::vector<FunctionExpr> densities;

  [[nodiscard]] bool zero_measure() const { return atoms.empty() && densities.empty(); }
};

FunctionExpr catalog(std::string_view name, const ParamMap& params = {});

/// Evaluates f at x >= 0. At x = 0 the analytic limit f(0+) is returned.
/// Throws DomainError for x < 0 or when no finite limit exists, and
/// NumericalError on overflow; never returns NaN.
double eval(const FunctionExpr& f, double x);

/// Complex extension for expressions built from atoms with a known analytic
/// continuation (log1p, power, lambda_ratio, ...); nullopt otherwise.
std::optional<std::complex<double>> eval_complex(const FunctionExpr& f, std::complex<double> z);

FunctionExpr sum(std::vector<FunctionExpr> terms);
FunctionExpr product(std::vector<FunctionExpr> factors);
/// f o g
FunctionExpr compose(const FunctionExpr& f, const FunctionExpr& g);
FunctionExpr combine(const FunctionExpr& f, const FunctionExpr& g, CombineRule rule, double alpha);
/// h(f(x)) * g(x / f(x))
FunctionExpr uchiyama(const FunctionExpr& h, const FunctionExpr& f, const FunctionExpr& g);
FunctionExpr dualize(const FunctionExpr& f, DualRule rule);
/// g1(x^alpha) * g2(x^beta); BF when g1, g2 are BF and alpha + beta <= 1.
FunctionExpr schur(const FunctionExpr& g1, const FunctionExpr& g2, double alpha, double beta);
/// c - f(x)
FunctionExpr complement(double c, const FunctionExpr& f);
/// Function defined by its Levy-Khintchine triple.
FunctionExpr levy_function(LevyTriple triple);
/// r -> drift r^2 + int (1 - cos(s r)) mu(ds) with m(t) = mu[t, inf); see
/// schoenberg_levy.hpp for the checked constructor.
FunctionExpr spectral(const FunctionExpr& f);

/// One bottom-up pass of the closure rules.
TagSet infer_class(const FunctionExpr& f);

/// The closure rules as a pure function of a node's shape and its
/// children's tags. Exposed for property tests.
TagSet infer_tags(NodeKind kind, int rule, std::span<const double> params,
                  std::span<const TagSet> child_tags);

/// True when f vanishes at every point of a log grid on [1e-6, 1e6].
bool identically_zero(const FunctionExpr& f);

}  // namespace bvg
