#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mlspec/rational.hpp"

namespace mlspec {

struct Interval {
  Rational lo;
  Rational hi;
  bool lo_closed = true;
  bool hi_closed = true;

  static Interval closed(Rational lo, Rational hi) { return {std::move(lo), std::move(hi), true, true}; }
  static Interval point(const Rational& v) { return {v, v, true, true}; }

  bool empty() const;
  bool contains(const Rational& v) const;

  friend bool operator==(const Interval&, const Interval&) = default;
};

/// Finite union of pairwise-disjoint, non-empty intervals inside [0,1],
/// kept sorted by lower bound.
class IntervalSet {
 public:
  /// Throws Error(MalformedInterval) for an empty interval or an empty
  /// list, Error(OutOfRange) for bounds outside [0,1] and
  /// Error(OverlappingIntervals) when two intervals share a point.
  explicit IntervalSet(std::vector<Interval> intervals);

  static IntervalSet single(Interval i) { return IntervalSet({std::move(i)}); }
  static IntervalSet closed(Rational lo, Rational hi) { return single(Interval::closed(std::move(lo), std::move(hi))); }
  static IntervalSet point(const Rational& v) { return single(Interval::point(v)); }

  bool contains(const Rational& v) const;
  /// Every point of *this lies in `other`.
  bool subset_of(const IntervalSet& other) const;

  const std::vector<Interval>& intervals() const noexcept { return intervals_; }

  /// "[0,1]", "=0.2", "(0.95,1]", "[0,0.1] u [0.9,1]".
  std::string to_string() const;

  friend bool operator==(const IntervalSet&, const IntervalSet&) = default;

 private:
  std::vector<Interval> intervals_;
};

/// Parses the interval syntax used after P in formulas. Throws
/// SyntaxError with codes MalformedInterval, OverlappingIntervals or
/// OutOfRange.
IntervalSet parse_interval(std::string_view text);

}  // namespace mlspec
