#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "mlspec/kernels.hpp"
#include "mlspec/rational.hpp"
#include "mlspec/value.hpp"

namespace mlspec {

/// Dictionary-encoded column of a label-valued variable, one code per
/// distinct state of the owning world.
struct LabelColumn {
  std::vector<std::int32_t> codes;
  std::vector<std::string> dictionary;

  /// -1 when the symbol does not occur in the column.
  std::int32_t code_of(std::string_view symbol) const;
};

/// A possible world: a finite multiset of states. Probabilities are
/// count/total, exact. Immutable after construction.
class World {
 public:
  /// Merges duplicate rows into multiplicities. Throws Error(EmptyWorld)
  /// for no rows and Error(SchemaMismatch) when variable sets differ.
  static World from_rows(std::span<const State> rows, std::string name);

  /// Entries with zero multiplicity are dropped; duplicates are merged.
  static World from_counts(std::vector<std::pair<State, std::uint64_t>> entries, std::string name);

  const std::string& name() const noexcept { return name_; }
  World renamed(std::string name) const;

  const std::vector<std::string>& variables() const noexcept { return variables_; }
  bool has_variable(std::string_view variable) const;

  /// Number of distinct states.
  std::size_t size() const noexcept { return states_.size(); }
  /// Total multiplicity N.
  std::uint64_t total() const noexcept { return total_; }

  std::span<const State> states() const noexcept { return states_; }
  std::span<const std::uint64_t> counts() const noexcept { return counts_; }

  /// count(s)/N, 0 when `s` does not occur.
  Rational prob(const State& s) const;
  std::uint64_t count(const State& s) const;

  /// Sub-multiset of the entries whose mask byte is 1, with raw
  /// multiplicities. nullopt when nothing is selected.
  std::optional<World> select(const kernels::Mask& mask, std::string name) const;

  /// nullptr unless every value of `variable` is a label.
  const LabelColumn* label_column(std::string_view variable) const;

  /// Structural equality of the multisets (names are ignored).
  friend bool operator==(const World& a, const World& b) {
    return a.states_ == b.states_ && a.counts_ == b.counts_;
  }

 private:
  World() = default;
  void build_columns();

  std::string name_;
  std::vector<std::string> variables_;
  std::vector<State> states_;  // distinct, sorted
  std::vector<std::uint64_t> counts_;
  std::uint64_t total_ = 0;
  std::map<std::string, LabelColumn, std::less<>> label_columns_;
};

/// Finite distribution over outcomes with exact masses; all masses are
/// positive and sum to 1.
class Distribution {
 public:
  /// Throws std::invalid_argument if a mass is non-positive or the masses
  /// do not sum to exactly 1.
  explicit Distribution(std::map<Outcome, Rational> masses);

  static Distribution point(Outcome outcome);
  /// Single-variable convenience.
  static Distribution over_values(const std::map<Value, Rational>& masses);

  /// Mass of `outcome`, 0 outside the support.
  Rational operator[](const Outcome& outcome) const;
  Rational mass(const Value& value) const;

  std::size_t size() const noexcept { return masses_.size(); }
  const std::map<Outcome, Rational>& masses() const noexcept { return masses_; }
  std::vector<Outcome> support() const;

  friend bool operator==(const Distribution&, const Distribution&) = default;

 private:
  std::map<Outcome, Rational> masses_;
};

/// Unnormalized marginal: multiplicity per observed outcome.
struct MarginalCounts {
  std::map<Outcome, std::uint64_t> counts;
  std::uint64_t total = 0;
};

/// Throws Error(UnknownVariable) for variables the world does not carry,
/// std::invalid_argument for an empty variable list.
MarginalCounts marginal_counts(const World& w, std::span<const std::string> variables);

/// Joint distribution of `variables` under w.
Distribution marginal(const World& w, std::span<const std::string> variables);
Distribution marginal(const World& w, const std::string& variable);

Distribution to_distribution(const MarginalCounts& counts);

}  // namespace mlspec
