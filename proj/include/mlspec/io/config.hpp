#pragma once

// Model configuration (JSON). Relative paths resolve against the
// directory holding the document. See docs/model-config.md.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "mlspec/io/adapter.hpp"
#include "mlspec/io/transform.hpp"
#include "mlspec/model.hpp"

namespace mlspec::io {

struct LoadOptions {
  /// Replaces the seed of every seeded transform.
  std::optional<std::uint64_t> seed;
};

struct LoadedModel {
  DistributionalModel model;
  std::optional<AdapterSpec> classifier;
  std::optional<AdapterSpec> oracle;
  std::map<std::string, TransformSpec> transforms;
};

/// Throws Error(ConfigError) for structural problems and passes through
/// loader, adapter and transform errors.
LoadedModel parse_model(std::string_view json_text, const std::filesystem::path& base_dir,
                        const LoadOptions& options = {});

LoadedModel load_model(const std::filesystem::path& path, const LoadOptions& options = {});

/// Reads a JSON number or string as an exact rational. Numbers are taken
/// at their shortest round-trip decimal form, so 0.1 reads as 1/10.
/// Throws Error(ConfigError).
Rational rational_from_json_text(std::string_view json_scalar);

}  // namespace mlspec::io
