#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mlspec/divergence.hpp"
#include "mlspec/expr.hpp"
#include "mlspec/parser.hpp"
#include "mlspec/world.hpp"

namespace mlspec {

/// User predicate: body over the bound parameters.
struct PredicateDef {
  std::string symbol;
  Expr body;
};

/// Group membership eta_G(x); the body's single parameter is the input.
struct GroupDef {
  std::string symbol;
  Expr body;
};

/// loss(y, yhat), rational-valued.
using LossFn = std::function<Rational(const Value& y, const Value& yhat)>;

/// Dataset transformation T: W -> W.
using TransformFn = std::function<World(const World&)>;

/// 1 when the labels differ, 0 otherwise.
Rational zero_one_loss(const Value& y, const Value& yhat);
/// |y - yhat| for numeric labels ("3", "0.5" or single-component vectors).
/// Throws Error(IncompatibleValues) otherwise.
Rational label_distance_loss(const Value& y, const Value& yhat);

using Relation = std::set<std::pair<std::string, std::string>>;

/// A finite universe of named worlds with accessibility relations and the
/// definitions atoms resolve against.
struct DistributionalModel {
  std::map<std::string, World> worlds;
  std::map<std::string, Relation> relations;
  std::map<std::string, PredicateDef> predicates;
  std::map<std::string, GroupDef> groups;
  std::set<std::string> label_alphabet;
  std::optional<MetricSpec> metric;
  std::map<std::string, TransformFn> transforms;
  std::map<std::string, LossFn> losses{{"zero_one", zero_one_loss},
                                       {"label_distance", label_distance_loss}};
  std::vector<std::string> feature_names;

  /// Throws Error(UnknownWorld).
  const World& world(const std::string& name) const;

  /// Adds a world under its own name, replacing any previous one.
  void add_world(World w);

  Declarations declarations() const;

  /// Relation pairs must reference known worlds and all worlds must share
  /// one variable set, not counting yhat. Throws Error(UnknownWorld) / Error(SchemaMismatch).
  void validate() const;
};

}  // namespace mlspec
