#pragma once

#include <map>
#include <set>
#include <string>
#include <string_view>

#include "mlspec/formula.hpp"

namespace mlspec {

/// Symbols a formula may refer to.
///
/// Besides the user predicates listed in `predicates`, atoms resolve to
/// these built-ins:
///   psi(x, yhat)   classifier output relation, true on every state that
///                  carries a prediction
///   h(x, y)        oracle relation, true on every state carrying a label
///   psi_<l>(x)     yhat = l, for l in `labels`
///   h_<l>(x)       y = l, for l in `labels`
///   eta_<G>(x)     membership of x in group G, for G in `groups`
struct Declarations {
  std::set<std::string> variables{"x", "y", "yhat"};
  std::set<std::string> labels;
  std::set<std::string> groups;
  std::map<std::string, std::size_t> predicates;  // symbol -> arity
  std::set<std::string> transforms;
  std::set<std::string> relations;
  std::set<std::string> losses;
};

/// How an atom symbol resolves.
struct AtomKind {
  enum class Kind { classifier, oracle, predicted_label, true_label, group, user };
  Kind kind;
  std::string name;  // label, group or predicate symbol
  std::size_t arity;
};

/// Throws Error(UnknownSymbol) for unresolvable symbols.
AtomKind resolve_atom(std::string_view symbol, const Declarations& decls);

/// Parses a dataset formula. Throws SyntaxError carrying line/column and
/// the expected-token set; codes are SyntaxError, UnknownSymbol,
/// ArityMismatch, MalformedInterval, OverlappingIntervals, OutOfRange.
DatasetFormula parse(std::string_view text, const Declarations& decls);

/// Parses a static formula (the guard language of ~> and filters).
StaticFormula parse_static(std::string_view text, const Declarations& decls);

/// Canonical text; parse(print(f)) == f.
std::string print(const DatasetFormula& f);
std::string print(const StaticFormula& f);

}  // namespace mlspec
