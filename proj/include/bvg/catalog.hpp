#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bvg/function_expr.hpp"
#include "bvg/tags.hpp"

namespace bvg {

struct ParamSpec {
  std::string name;
  double lo;
  double hi;
  bool lo_open;
  bool hi_open;
  double default_value;
  bool integer = false;

  [[nodiscard]] bool admits(double v) const;
  [[nodiscard]] std::string range_str() const;
};

/// Catalog entry. `eval` is called with x > 0 only; `at_zero` returns f(0+)
/// (+inf when the limit diverges).
struct AtomSpec {
  std::string name;
  std::string formula;
  /// spatial | cbf_table | cbf | cm | auxiliary
  std::string group;
  std::string anchor;
  std::vector<ParamSpec> params;
  std::function<TagSet(std::span<const double>)> tags;
  std::function<double(std::span<const double>, double)> eval;
  std::function<double(std::span<const double>)> at_zero;
  std::function<std::optional<LevyTriple>(std::span<const double>)> levy = {};
  std::function<std::complex<double>(std::span<const double>, std::complex<double>)> eval_complex = {};
};

/// Every builtin atom, in stable listing order.
const std::vector<AtomSpec>& atom_catalog();
const AtomSpec* find_atom(std::string_view name);

/// Atom names of the complete Bernstein table, in row-major order.
std::vector<std::string> cbf_table_names();

/// Catalog atom with every parameter at its default.
FunctionExpr catalog_default(std::string_view name);

}  // namespace bvg
