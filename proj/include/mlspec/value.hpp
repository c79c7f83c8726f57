#pragma once

#include <initializer_list>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "mlspec/rational.hpp"

namespace mlspec {

using NumVec = std::vector<Rational>;

/// A datum bound to a measurement variable: a numeric feature vector or a
/// categorical symbol.
class Value {
 public:
  static Value numbers(NumVec components);
  static Value number(Rational component);
  static Value label(std::string symbol);

  bool is_numeric() const noexcept { return data_.index() == 0; }
  bool is_label() const noexcept { return data_.index() == 1; }

  const NumVec& components() const;
  const std::string& symbol() const;

  /// "pos", "(1, 2.5)".
  std::string to_string() const;

  friend bool operator==(const Value& a, const Value& b) { return a.data_ == b.data_; }
  friend bool operator<(const Value& a, const Value& b) { return a.data_ < b.data_; }

 private:
  struct Symbol {
    std::string text;
    friend bool operator==(const Symbol&, const Symbol&) = default;
    friend bool operator<(const Symbol& a, const Symbol& b) { return a.text < b.text; }
  };

  std::variant<NumVec, Symbol> data_;
};

/// A value tuple; the outcome space of a (joint) marginal.
using Outcome = std::vector<Value>;

std::string to_string(const Outcome& outcome);

/// One data row: a total assignment from measurement-variable names to
/// values. Entries are kept sorted by name.
class State {
 public:
  State() = default;
  State(std::initializer_list<std::pair<std::string, Value>> entries);
  explicit State(std::vector<std::pair<std::string, Value>> entries);

  /// nullptr when `variable` is not assigned.
  const Value* find(std::string_view variable) const;
  /// Throws Error(UnknownVariable).
  const Value& at(std::string_view variable) const;

  std::vector<std::string> variables() const;
  const std::vector<std::pair<std::string, Value>>& entries() const { return entries_; }

  /// Copy with `variable` set (added or replaced).
  State with(const std::string& variable, Value value) const;
  /// Copy without `variable`.
  State without(std::string_view variable) const;

  friend bool operator==(const State&, const State&) = default;
  friend bool operator<(const State& a, const State& b) { return a.entries_ < b.entries_; }

 private:
  std::vector<std::pair<std::string, Value>> entries_;
};

}  // namespace mlspec
