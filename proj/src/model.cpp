#include "mlspec/model.hpp"

#include "mlspec/error.hpp"

namespace mlspec {

Rational zero_one_loss(const Value& y, const Value& yhat) {
  return y == yhat ? Rational(0) : Rational(1);
}

namespace {

Rational numeric_label(const Value& v) {
  if (v.is_numeric()) {
    if (v.components().size() == 1) return v.components()[0];
  } else if (auto r = try_parse_rational(v.symbol())) {
    return *r;
  }
  throw Error(ErrorCode::IncompatibleValues,
              "label_distance needs numeric labels, got '" + v.to_string() + "'");
}

}  // namespace

Rational label_distance_loss(const Value& y, const Value& yhat) {
  return abs(numeric_label(y) - numeric_label(yhat));
}

const World& DistributionalModel::world(const std::string& name) const {
  auto it = worlds.find(name);
  if (it == worlds.end()) throw Error(ErrorCode::UnknownWorld, "unknown world '" + name + "'");
  return it->second;
}

void DistributionalModel::add_world(World w) {
  std::string name = w.name();
  worlds.insert_or_assign(std::move(name), std::move(w));
}

Declarations DistributionalModel::declarations() const {
  Declarations d;
  for (const auto& [name, w] : worlds) {
    for (const auto& v : w.variables()) d.variables.insert(v);
  }
  d.labels = label_alphabet;
  for (const auto& [name, g] : groups) d.groups.insert(name);
  for (const auto& [name, p] : predicates) d.predicates[name] = p.body.arity();
  for (const auto& [name, t] : transforms) d.transforms.insert(name);
  for (const auto& [name, r] : relations) d.relations.insert(name);
  for (const auto& [name, l] : losses) d.losses.insert(name);
  return d;
}

void DistributionalModel::validate() const {
  // yhat may be absent from some worlds (no classifier configured); psi
  // atoms then fail with MissingPredictions when evaluated there.
  auto without_yhat = [](const World& w) {
    std::vector<std::string> v = w.variables();
    std::erase(v, "yhat");
    return v;
  };
  std::optional<std::vector<std::string>> vars;
  for (const auto& [name, w] : worlds) {
    std::vector<std::string> mine = without_yhat(w);
    if (vars && *vars != mine) {
      throw Error(ErrorCode::SchemaMismatch,
                  "world '" + name + "' has a different variable set from the others");
    }
    vars = std::move(mine);
  }
  for (const auto& [id, pairs] : relations) {
    for (const auto& [a, b] : pairs) {
      for (const auto* n : {&a, &b}) {
        if (!worlds.count(*n)) {
          throw Error(ErrorCode::UnknownWorld,
                      "relation '" + id + "' references unknown world '" + *n + "'");
        }
      }
    }
  }
}

}  // namespace mlspec
