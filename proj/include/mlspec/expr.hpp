#pragma once

// Small expression language for predicate and group bodies.
//
//   or      := and ('|' and)*
//   and     := not ('&' not)*
//   not     := '!' not | compare
//   compare := sum (('=' | '!=' | '<' | '<=' | '>' | '>=') sum)?
//            | sum 'in' '{' sum (',' sum)* '}'
//   sum     := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := number | 'label' | "label" | 'true' | 'false'
//            | param ('.' feature | '[' index ']')? | '(' or ')'
//
// A parameter refers to the argument bound at that position; a feature
// name selects a component of a numeric argument by the model's feature
// names. Numbers are exact rationals.

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mlspec/rational.hpp"
#include "mlspec/value.hpp"

namespace mlspec {

class Expr {
 public:
  using Result = std::variant<bool, Rational, std::string, NumVec>;

  /// Parses and resolves names. Throws SyntaxError for malformed text and
  /// Error(UnknownVariable) for names outside `params` / `feature_names`.
  static Expr compile(std::string_view text, std::vector<std::string> params,
                      const std::vector<std::string>& feature_names);

  /// Evaluates with args[i] bound to params[i]. Throws
  /// Error(IncompatibleValues) on type errors.
  Result evaluate(std::span<const Value* const> args) const;

  /// evaluate() that must produce a boolean.
  bool holds(std::span<const Value* const> args) const;

  const std::string& source() const noexcept { return source_; }
  std::size_t arity() const noexcept { return params_.size(); }
  const std::vector<std::string>& params() const noexcept { return params_; }

  struct Node;

 private:
  Expr() = default;

  std::string source_;
  std::vector<std::string> params_;
  std::shared_ptr<const Node> root_;
};

}  // namespace mlspec
