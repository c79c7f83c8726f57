#pragma once

#include <span>

#include "mlspec/divergence.hpp"
#include "mlspec/model.hpp"

namespace mlspec::io {

/// All ordered pairs (w, w') among `worlds` whose x-marginals are within
/// `epsilon` in W-infinity under `metric`, decided by one feasibility
/// check at the threshold. Reflexive pairs are always
/// present and the result is symmetric.
Relation build_robustness_relation(std::span<const World* const> worlds, const Rational& epsilon,
                                   const MetricSpec& metric);

}  // namespace mlspec::io
