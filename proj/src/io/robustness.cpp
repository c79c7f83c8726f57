#include "mlspec/io/robustness.hpp"

namespace mlspec::io {

Relation build_robustness_relation(std::span<const World* const> worlds, const Rational& epsilon,
                                   const MetricSpec& metric) {
  std::vector<Distribution> marginals;
  marginals.reserve(worlds.size());
  for (const World* w : worlds) marginals.push_back(marginal(*w, metric.variable));
  Relation out;
  for (std::size_t i = 0; i < worlds.size(); ++i) {
    out.emplace(worlds[i]->name(), worlds[i]->name());
    for (std::size_t j = i + 1; j < worlds.size(); ++j) {
      if (coupling_feasible(marginals[i], marginals[j], metric, Distance(epsilon))) {
        out.emplace(worlds[i]->name(), worlds[j]->name());
        out.emplace(worlds[j]->name(), worlds[i]->name());
      }
    }
  }
  return out;
}

}  // namespace mlspec::io
