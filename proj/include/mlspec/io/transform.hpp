#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "mlspec/io/adapter.hpp"
#include "mlspec/model.hpp"

namespace mlspec::io {

/// Declarative dataset transformation.
///
///   filter     keep rows whose `expression` (over x, y, yhat) holds
///   subsample  draw `count` rows without replacement
///   perturb    add noise*k/1000 to every numeric feature, k uniform in
///              [-1000, 1000] per row and feature; a categorical x is
///              replaced by another observed category with probability
///              `flip`
///   map        replace x by the values of `expressions` (over x)
///
/// perturb and map change x, so yhat is recomputed by the classifier
/// adapter when one is available and dropped otherwise. y is kept unless
/// an oracle adapter is available.
struct TransformSpec {
  enum class Kind { filter, subsample, perturb, map };
  Kind kind = Kind::filter;
  std::string expression;
  std::vector<std::string> expressions;
  std::uint64_t count = 0;
  std::optional<Rational> noise;
  std::optional<Rational> flip;
  std::uint64_t seed = 0;
  /// perturb/map: true requires an adapter, false never calls one, unset
  /// uses one if configured.
  std::optional<bool> relabel;
};

struct TransformContext {
  std::optional<AdapterSpec> classifier;
  std::optional<AdapterSpec> oracle;
  std::set<std::string> labels;
  std::vector<std::string> feature_names;
};

/// Deterministic given spec.seed. The result keeps the input's name.
/// Throws Error(InvalidTransform), Error(IncompatibleFeature) or
/// Error(MissingAdapter).
World apply_transform(const TransformSpec& spec, const World& w, const TransformContext& context);

/// Closure suitable for DistributionalModel::transforms.
TransformFn make_transform(TransformSpec spec, TransformContext context);

/// Uniform integer in [0, bound), by rejection. Unlike
/// std::uniform_int_distribution the sequence is the same on every
/// standard library.
std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound);

}  // namespace mlspec::io
