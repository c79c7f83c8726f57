#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "mlspec/rational.hpp"
#include "mlspec/value.hpp"
#include "mlspec/world.hpp"

namespace mlspec {

/// Ground metric on values: an L^p distance on numeric vectors (integer
/// p >= 1, or p = infinity) or the discrete metric.
struct MetricSpec {
  enum class Kind { lp, discrete };

  Kind kind = Kind::discrete;
  unsigned p = 1;  // 0 encodes p = infinity; ignored for discrete
  std::string variable = "x";

  static MetricSpec discrete(std::string variable = "x");
  static MetricSpec lp(unsigned p, std::string variable = "x");
  static MetricSpec linf(std::string variable = "x");

  /// "discrete", "l1", "l2", "linf", "l3", ...
  std::string to_string() const;
  /// Inverse of to_string. Throws Error(UnknownKind).
  static MetricSpec parse(std::string_view text, std::string variable = "x");

  friend bool operator==(const MetricSpec&, const MetricSpec&) = default;
};

/// Exact non-negative distance represented as power^(1/root). Roots only
/// arise for L^p with 1 < p < infinity; all other metrics have root 1.
/// Ordering and thresholding stay in rational arithmetic.
class Distance {
 public:
  Distance() = default;
  explicit Distance(Rational value) : power_(std::move(value)), root_(1) {}
  Distance(Rational power, unsigned root);

  const Rational& power() const noexcept { return power_; }
  unsigned root() const noexcept { return root_; }

  /// The rational value when power is a perfect root-th power.
  std::optional<Rational> exact_value() const;
  /// "5", "3/10", "2^(1/2)".
  std::string exact_string() const;
  /// 12 significant digits.
  std::string decimal() const;

  bool at_most(const Rational& bound) const;

  friend bool operator==(const Distance& a, const Distance& b);
  friend bool operator<(const Distance& a, const Distance& b);
  friend bool operator<=(const Distance& a, const Distance& b) { return !(b < a); }

 private:
  Rational power_{0};
  unsigned root_ = 1;
};

/// Throws Error(IncompatibleValues) for lp on labels or on vectors of
/// different dimension.
Distance ground_metric(const MetricSpec& metric, const Value& a, const Value& b);
/// Outcome form. lp concatenates the components of all tuple entries.
Distance ground_metric(const MetricSpec& metric, const Outcome& a, const Outcome& b);

/// sup over events of |mu0[R] - mu1[R]|, computed as half the L1 gap.
Rational total_variation(const Distribution& mu0, const Distribution& mu1);

/// Total variation between two count vectors aligned over a common outcome
/// list, normalized by their totals. Uses the SIMD kernels when the scaled
/// values fit, exact big-integer arithmetic otherwise.
Rational total_variation_counts(std::span<const std::uint64_t> counts0, std::uint64_t total0,
                                std::span<const std::uint64_t> counts1, std::uint64_t total1);
Rational total_variation(const MarginalCounts& a, const MarginalCounts& b);

/// Min over couplings of the max ground distance on the coupling support.
/// Binary search over sorted pairwise distances with integer max-flow
/// feasibility at each threshold.
Distance wasserstein_inf(const Distribution& mu0, const Distribution& mu1,
                         const MetricSpec& metric);

/// Whether a coupling of mu0 and mu1 exists using only pairs at ground
/// distance <= threshold (max-flow).
bool coupling_feasible(const Distribution& mu0, const Distribution& mu1,
                       const MetricSpec& metric, const Distance& threshold);

struct DivergenceSpec {
  enum class Kind { tv, winf };

  Kind kind = Kind::tv;
  /// For winf. When empty the model's metric is used.
  std::optional<MetricSpec> metric;

  static DivergenceSpec tv() { return {}; }
  static DivergenceSpec winf(std::optional<MetricSpec> metric = std::nullopt) {
    return {Kind::winf, std::move(metric)};
  }

  /// "tv", "winf", "winf(l2)".
  std::string to_string() const;

  friend bool operator==(const DivergenceSpec&, const DivergenceSpec&) = default;
};

/// Dispatches to total_variation or wasserstein_inf. `fallback_metric`
/// backs a winf spec without its own metric; Error(IncompatibleValues) if
/// neither is present.
Distance divergence(const DivergenceSpec& spec, const Distribution& mu0, const Distribution& mu1,
                    const MetricSpec* fallback_metric = nullptr);

}  // namespace mlspec
