#pragma once

#include "bvg/function_expr.hpp"
#include "json.hpp"

namespace bvg {

/// Expression DSL:
///   {"atom": name, "params": {...}}
///   {"op": "sum"|"product"|"compose"|"uchiyama"|"spectral", "args": [...]}
///   {"op": "combine", "rule": ..., "alpha": a, "args": [f, g]}
///   {"op": "dualize", "rule": ..., "args": [f]}
///   {"op": "schur", "alpha": a, "beta": b, "args": [g1, g2]}
///   {"op": "complement", "c": c, "args": [f]}
///   {"op": "levy", "alpha": a, "beta": b, "atoms": [[t, mass], ...], "densities": [...]}
nlohmann::json to_json(const FunctionExpr& f);
FunctionExpr expr_from_json(const nlohmann::json& j);

}  // namespace bvg
