#include "mlspec/formula.hpp"

namespace mlspec {

StaticFormula StaticFormula::atom(std::string symbol, std::vector<std::string> args) {
  return StaticFormula(std::make_shared<const StaticNode>(
      StaticNode{st::Atom{std::move(symbol), std::move(args)}}));
}

StaticFormula StaticFormula::truth() {
  static const StaticFormula t(std::make_shared<const StaticNode>(StaticNode{st::True{}}));
  return t;
}

StaticFormula StaticFormula::falsum() {
  static const StaticFormula f(std::make_shared<const StaticNode>(StaticNode{st::False{}}));
  return f;
}

StaticFormula StaticFormula::negation(StaticFormula operand) {
  return StaticFormula(std::make_shared<const StaticNode>(StaticNode{st::Not{std::move(operand)}}));
}

StaticFormula StaticFormula::conjunction(StaticFormula lhs, StaticFormula rhs) {
  return StaticFormula(
      std::make_shared<const StaticNode>(StaticNode{st::And{std::move(lhs), std::move(rhs)}}));
}

DatasetFormula DatasetFormula::prob(IntervalSet interval, StaticFormula body) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::Prob{std::move(interval), std::move(body)}}));
}

DatasetFormula DatasetFormula::negation(DatasetFormula operand) {
  return DatasetFormula(
      std::make_shared<const DatasetNode>(DatasetNode{ds::Not{std::move(operand)}}));
}

DatasetFormula DatasetFormula::conjunction(DatasetFormula lhs, DatasetFormula rhs) {
  return DatasetFormula(
      std::make_shared<const DatasetNode>(DatasetNode{ds::And{std::move(lhs), std::move(rhs)}}));
}

DatasetFormula DatasetFormula::transform(std::string name, DatasetFormula body) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::Transform{std::move(name), std::move(body)}}));
}

DatasetFormula DatasetFormula::cond(StaticFormula guard, DatasetFormula body) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::Cond{std::move(guard), std::move(body)}}));
}

DatasetFormula DatasetFormula::indist(StaticFormula lhs, StaticFormula rhs, std::string variable,
                                      Rational epsilon, DivergenceSpec divergence) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::Indist{std::move(lhs), std::move(rhs), std::move(variable),
                             std::move(epsilon), std::move(divergence)}}));
}

DatasetFormula DatasetFormula::know(std::string relation, DatasetFormula body) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::Know{std::move(relation), std::move(body)}}));
}

DatasetFormula DatasetFormula::exp_loss(std::string loss, Rational bound) {
  return DatasetFormula(std::make_shared<const DatasetNode>(
      DatasetNode{ds::ExpLoss{std::move(loss), std::move(bound)}}));
}

StaticFormula operator!(StaticFormula f) { return StaticFormula::negation(std::move(f)); }

StaticFormula operator&(StaticFormula a, StaticFormula b) {
  return StaticFormula::conjunction(std::move(a), std::move(b));
}

StaticFormula operator|(StaticFormula a, StaticFormula b) { return !(!std::move(a) & !std::move(b)); }

StaticFormula implies(StaticFormula a, StaticFormula b) { return !std::move(a) | std::move(b); }

StaticFormula iff(StaticFormula a, StaticFormula b) { return implies(a, b) & implies(b, a); }

DatasetFormula operator!(DatasetFormula f) { return DatasetFormula::negation(std::move(f)); }

DatasetFormula operator&(DatasetFormula a, DatasetFormula b) {
  return DatasetFormula::conjunction(std::move(a), std::move(b));
}

DatasetFormula operator|(DatasetFormula a, DatasetFormula b) {
  return !(!std::move(a) & !std::move(b));
}

DatasetFormula implies(DatasetFormula a, DatasetFormula b) { return !std::move(a) | std::move(b); }

DatasetFormula iff(DatasetFormula a, DatasetFormula b) { return implies(a, b) & implies(b, a); }

DatasetFormula possibly(std::string relation, DatasetFormula body) {
  return !DatasetFormula::know(std::move(relation), !std::move(body));
}

}  // namespace mlspec
