#include "mlspec/templates.hpp"

#include <stdexcept>

#include "mlspec/error.hpp"

namespace mlspec::templates {

namespace {

struct NamedKind {
  std::string_view name;
  Confusion kind;
};

constexpr NamedKind kNames[] = {
    {"precision", Confusion::precision},     {"recall", Confusion::recall},
    {"accuracy", Confusion::accuracy},       {"prevalence", Confusion::prevalence},
    {"fdr", Confusion::fdr},                 {"for", Confusion::false_omission},
    {"npv", Confusion::npv},                 {"fallout", Confusion::fallout},
    {"specificity", Confusion::specificity}, {"missrate", Confusion::missrate},
};

StaticFormula classifier() { return StaticFormula::atom("psi", {"x", "yhat"}); }
StaticFormula oracle() { return StaticFormula::atom("h", {"x", "y"}); }

DatasetFormula conjoin(const std::vector<DatasetFormula>& parts) {
  if (parts.empty()) throw std::invalid_argument("empty label list");
  DatasetFormula out = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) out = out & parts[i];
  return out;
}

}  // namespace

std::string_view confusion_name(Confusion kind) {
  for (const auto& n : kNames) {
    if (n.kind == kind) return n.name;
  }
  return "?";
}

Confusion parse_confusion(std::string_view name) {
  for (const auto& n : kNames) {
    if (n.name == name) return n.kind;
  }
  throw Error(ErrorCode::UnknownKind, "unknown confusion kind '" + std::string(name) + "'");
}

StaticFormula predicted(const std::string& label) {
  return StaticFormula::atom("psi_" + label, {"x"});
}

StaticFormula actual(const std::string& label) { return StaticFormula::atom("h_" + label, {"x"}); }

DatasetFormula confusion(Confusion kind, const std::string& label, IntervalSet interval) {
  StaticFormula p = predicted(label);
  StaticFormula h = actual(label);
  auto prob = [&](StaticFormula body) { return DatasetFormula::prob(interval, std::move(body)); };
  switch (kind) {
    case Confusion::precision: return DatasetFormula::cond(p, prob(h));
    case Confusion::recall: return DatasetFormula::cond(h, prob(p));
    case Confusion::accuracy: return prob(iff(p, h));
    case Confusion::prevalence: return prob(h);
    case Confusion::fdr: return DatasetFormula::cond(p, prob(!h));
    case Confusion::false_omission: return DatasetFormula::cond(!p, prob(h));
    case Confusion::npv: return DatasetFormula::cond(!p, prob(!h));
    case Confusion::fallout: return DatasetFormula::cond(!h, prob(p));
    case Confusion::specificity: return DatasetFormula::cond(!h, prob(!p));
    case Confusion::missrate: return DatasetFormula::cond(h, prob(!p));
  }
  throw Error(ErrorCode::UnknownKind, "unknown confusion kind");
}

DatasetFormula generalization_error(const std::string& loss, Rational bound) {
  return DatasetFormula::cond(oracle() & classifier(),
                              DatasetFormula::exp_loss(loss, std::move(bound)));
}

DatasetFormula target_robust(const std::string& label, const std::string& target,
                             IntervalSet interval, const std::string& relation) {
  return DatasetFormula::know(
      relation,
      DatasetFormula::cond(actual(label), DatasetFormula::prob(std::move(interval), !predicted(target))));
}

DatasetFormula total_robust(const std::string& label, IntervalSet interval,
                            const std::string& relation) {
  return robust_variant(Confusion::recall, label, std::move(interval), relation);
}

DatasetFormula robust_variant(Confusion kind, const std::string& label, IntervalSet interval,
                              const std::string& relation) {
  return DatasetFormula::know(relation, confusion(kind, label, std::move(interval)));
}

StaticFormula GroupRef::formula() const {
  StaticFormula eta = StaticFormula::atom("eta_" + symbol, {"x"});
  return complement ? !eta : eta;
}

DatasetFormula group_fairness(const GroupRef& g0, const GroupRef& g1, Rational epsilon) {
  return DatasetFormula::indist(g0.formula() & classifier(), g1.formula() & classifier(), "yhat",
                                std::move(epsilon), DivergenceSpec::tv());
}

DatasetFormula equalized_odds(const GroupRef& g0, const GroupRef& g1, Rational epsilon,
                              const std::vector<std::string>& labels) {
  std::vector<DatasetFormula> parts;
  for (const auto& l : labels) {
    StaticFormula gamma = classifier() & actual(l);
    parts.push_back(DatasetFormula::indist(g0.formula() & gamma, g1.formula() & gamma, "yhat",
                                           epsilon, DivergenceSpec::tv()));
  }
  return conjoin(parts);
}

DatasetFormula equal_opportunity(const std::string& g0, const std::string& label) {
  StaticFormula eta = StaticFormula::atom("eta_" + g0, {"x"});
  StaticFormula gamma = classifier() & actual(label);
  return DatasetFormula::indist(eta & gamma, !eta & gamma, "yhat", Rational(0),
                                DivergenceSpec::tv());
}

DatasetFormula sufficiency(const GroupRef& g0, const GroupRef& g1, Rational epsilon,
                           const std::vector<std::string>& labels) {
  std::vector<DatasetFormula> parts;
  for (const auto& l : labels) {
    StaticFormula gamma = predicted(l) & oracle();
    parts.push_back(DatasetFormula::indist(g0.formula() & gamma, g1.formula() & gamma, "y",
                                           epsilon, DivergenceSpec::tv()));
  }
  return conjoin(parts);
}

}  // namespace mlspec::templates
