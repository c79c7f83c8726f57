#pragma once

// Abstract syntax of static (per-state) and dataset (per-world) formulas.
//
// Only core connectives are represented. Disjunction, implication,
// equivalence and epistemic possibility are built by the sugar helpers at
// the bottom of this file, which expand them into core nodes:
//   a | b    == !(!a & !b)
//   a -> b   == !a | b
//   a <-> b  == (a -> b) & (b -> a)
//   Dia{r} f == !K{r} !f
//
// Formulas are immutable handles with structural equality.

#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "mlspec/divergence.hpp"
#include "mlspec/interval.hpp"
#include "mlspec/rational.hpp"

namespace mlspec {

struct StaticNode;

class StaticFormula {
 public:
  static StaticFormula atom(std::string symbol, std::vector<std::string> args);
  static StaticFormula truth();
  static StaticFormula falsum();
  static StaticFormula negation(StaticFormula operand);
  static StaticFormula conjunction(StaticFormula lhs, StaticFormula rhs);

  const StaticNode& node() const { return *node_; }

  friend bool operator==(const StaticFormula& a, const StaticFormula& b);

 private:
  explicit StaticFormula(std::shared_ptr<const StaticNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const StaticNode> node_;
};

namespace st {
struct Atom {
  std::string symbol;
  std::vector<std::string> args;
  friend bool operator==(const Atom&, const Atom&) = default;
};
struct True {
  friend bool operator==(const True&, const True&) = default;
};
struct False {
  friend bool operator==(const False&, const False&) = default;
};
struct Not {
  StaticFormula operand;
  friend bool operator==(const Not&, const Not&) = default;
};
struct And {
  StaticFormula lhs;
  StaticFormula rhs;
  friend bool operator==(const And&, const And&) = default;
};
}  // namespace st

struct StaticNode {
  std::variant<st::Atom, st::True, st::False, st::Not, st::And> v;
};

inline bool operator==(const StaticFormula& a, const StaticFormula& b) {
  return a.node_ == b.node_ || a.node_->v == b.node_->v;
}

struct DatasetNode;

class DatasetFormula {
 public:
  static DatasetFormula prob(IntervalSet interval, StaticFormula body);
  static DatasetFormula negation(DatasetFormula operand);
  static DatasetFormula conjunction(DatasetFormula lhs, DatasetFormula rhs);
  static DatasetFormula transform(std::string name, DatasetFormula body);
  static DatasetFormula cond(StaticFormula guard, DatasetFormula body);
  static DatasetFormula indist(StaticFormula lhs, StaticFormula rhs, std::string variable,
                               Rational epsilon, DivergenceSpec divergence);
  static DatasetFormula know(std::string relation, DatasetFormula body);
  static DatasetFormula exp_loss(std::string loss, Rational bound);

  const DatasetNode& node() const { return *node_; }

  friend bool operator==(const DatasetFormula& a, const DatasetFormula& b);

 private:
  explicit DatasetFormula(std::shared_ptr<const DatasetNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const DatasetNode> node_;
};

namespace ds {
struct Prob {
  IntervalSet interval;
  StaticFormula body;
  friend bool operator==(const Prob&, const Prob&) = default;
};
struct Not {
  DatasetFormula operand;
  friend bool operator==(const Not&, const Not&) = default;
};
struct And {
  DatasetFormula lhs;
  DatasetFormula rhs;
  friend bool operator==(const And&, const And&) = default;
};
struct Transform {
  std::string name;
  DatasetFormula body;
  friend bool operator==(const Transform&, const Transform&) = default;
};
/// guard ~> body: body evaluated on the restriction to guard.
struct Cond {
  StaticFormula guard;
  DatasetFormula body;
  friend bool operator==(const Cond&, const Cond&) = default;
};
/// lhs ~[variable; epsilon; divergence]~ rhs
struct Indist {
  StaticFormula lhs;
  StaticFormula rhs;
  std::string variable;
  Rational epsilon;
  DivergenceSpec divergence;
  friend bool operator==(const Indist&, const Indist&) = default;
};
struct Know {
  std::string relation;
  DatasetFormula body;
  friend bool operator==(const Know&, const Know&) = default;
};
struct ExpLoss {
  std::string loss;
  Rational bound;
  friend bool operator==(const ExpLoss&, const ExpLoss&) = default;
};
}  // namespace ds

struct DatasetNode {
  std::variant<ds::Prob, ds::Not, ds::And, ds::Transform, ds::Cond, ds::Indist, ds::Know,
               ds::ExpLoss>
      v;
};

inline bool operator==(const DatasetFormula& a, const DatasetFormula& b) {
  return a.node_ == b.node_ || a.node_->v == b.node_->v;
}

// Static sugar.
StaticFormula operator!(StaticFormula f);
StaticFormula operator&(StaticFormula a, StaticFormula b);
StaticFormula operator|(StaticFormula a, StaticFormula b);
StaticFormula implies(StaticFormula a, StaticFormula b);
StaticFormula iff(StaticFormula a, StaticFormula b);

// Dataset sugar.
DatasetFormula operator!(DatasetFormula f);
DatasetFormula operator&(DatasetFormula a, DatasetFormula b);
DatasetFormula operator|(DatasetFormula a, DatasetFormula b);
DatasetFormula implies(DatasetFormula a, DatasetFormula b);
DatasetFormula iff(DatasetFormula a, DatasetFormula b);
DatasetFormula possibly(std::string relation, DatasetFormula body);

}  // namespace mlspec
