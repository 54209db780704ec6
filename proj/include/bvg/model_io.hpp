#pragma once

#include <optional>
#include <string>

#include "bvg/schoenberg.hpp"
#include "bvg/variogram.hpp"
#include "json.hpp"

namespace bvg {

enum class ModelKind { Variogram, Covariance, DifferenceKernel, SumKernel };
std::string_view to_string(ModelKind kind);

/// Anything the CLI can evaluate: a variogram, a covariance, or one of the
/// shift kernels built on a variogram.
struct Model {
  ModelKind kind = ModelKind::Variogram;
  std::optional<Variogram> variogram;
  std::optional<StationaryCovariance> covariance;
  Vec eta;

  [[nodiscard]] int dim() const;
  [[nodiscard]] bool certified() const;
  [[nodiscard]] Kernel kernel() const;
  /// Variogram of a variogram model, C(0) - C for a covariance. Throws for
  /// shift kernels.
  [[nodiscard]] Variogram as_variogram() const;
};

/// {"kind", "profile", "mode", "A", "d", "certified", "max_dim",
///  "construction", "notes", "sill", "support_radius"}; shift kernels add
/// "eta" and nest the base under "base".
nlohmann::json to_json(const Variogram& v);
nlohmann::json to_json(const StationaryCovariance& c);
nlohmann::json to_json(const Model& m);

Variogram variogram_from_json(const nlohmann::json& j);
StationaryCovariance covariance_from_json(const nlohmann::json& j);
Model model_from_json(const nlohmann::json& j);

/// Builds a model from {"constructor": name, ...parameters}. Gate
/// violations propagate as ParameterGateError.
Model construct(const nlohmann::json& recipe);

/// Parses inline JSON or, failing that, reads the named file.
nlohmann::json load_json(const std::string& text_or_path);

}  // namespace bvg
