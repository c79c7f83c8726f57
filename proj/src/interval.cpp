#include "mlspec/interval.hpp"

#include <algorithm>

#include "mlspec/error.hpp"

namespace mlspec {

bool Interval::empty() const {
  if (lo > hi) return true;
  if (lo == hi) return !(lo_closed && hi_closed);
  return false;
}

bool Interval::contains(const Rational& v) const {
  bool above = lo_closed ? v >= lo : v > lo;
  bool below = hi_closed ? v <= hi : v < hi;
  return above && below;
}

namespace {

// a ends before b starts without sharing a point; a.lo <= b.lo assumed.
bool disjoint_ordered(const Interval& a, const Interval& b) {
  if (a.hi < b.lo) return true;
  if (a.hi == b.lo) return !(a.hi_closed && b.lo_closed);
  return false;
}

std::string render(const Interval& i) {
  if (i.lo == i.hi) return "=" + to_literal(i.lo);
  return std::string(i.lo_closed ? "[" : "(") + to_literal(i.lo) + "," + to_literal(i.hi) +
         (i.hi_closed ? "]" : ")");
}

}  // namespace

IntervalSet::IntervalSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  if (intervals_.empty()) throw Error(ErrorCode::MalformedInterval, "empty interval list");
  for (const auto& i : intervals_) {
    if (i.empty()) throw Error(ErrorCode::MalformedInterval, "empty interval " + render(i));
    if (i.lo < 0 || i.hi > 1) {
      throw Error(ErrorCode::OutOfRange, "interval " + render(i) + " is not inside [0,1]");
    }
  }
  std::sort(intervals_.begin(), intervals_.end(), [](const Interval& a, const Interval& b) {
    if (a.lo != b.lo) return a.lo < b.lo;
    return a.lo_closed && !b.lo_closed;
  });
  for (std::size_t k = 1; k < intervals_.size(); ++k) {
    if (!disjoint_ordered(intervals_[k - 1], intervals_[k])) {
      throw Error(ErrorCode::OverlappingIntervals, "intervals " + render(intervals_[k - 1]) +
                                                       " and " + render(intervals_[k]) + " overlap");
    }
  }
}

bool IntervalSet::contains(const Rational& v) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [&](const Interval& i) { return i.contains(v); });
}

bool IntervalSet::subset_of(const IntervalSet& other) const {
  // Each of our intervals must sit inside one of other's: a connected set
  // cannot straddle the gap between two disjoint intervals.
  for (const auto& mine : intervals_) {
    bool covered = std::any_of(other.intervals_.begin(), other.intervals_.end(), [&](const Interval& o) {
      bool lo_ok = o.lo < mine.lo || (o.lo == mine.lo && (o.lo_closed || !mine.lo_closed));
      bool hi_ok = mine.hi < o.hi || (o.hi == mine.hi && (o.hi_closed || !mine.hi_closed));
      return lo_ok && hi_ok;
    });
    if (!covered) return false;
  }
  return true;
}

std::string IntervalSet::to_string() const {
  std::string out;
  for (std::size_t k = 0; k < intervals_.size(); ++k) {
    if (k) out += " u ";
    out += render(intervals_[k]);
  }
  return out;
}

}  // namespace mlspec
