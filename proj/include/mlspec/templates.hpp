#pragma once

// Named property formulas: the table of confusion, generalization error,
// robustness and group fairness.

#include <string>
#include <string_view>
#include <vector>

#include "mlspec/formula.hpp"

namespace mlspec::templates {

enum class Confusion {
  precision,
  recall,
  accuracy,
  prevalence,
  fdr,
  false_omission,  // "for"
  npv,
  fallout,
  specificity,
  missrate,
};

inline constexpr Confusion all_confusions[] = {
    Confusion::precision, Confusion::recall,  Confusion::accuracy,    Confusion::prevalence,
    Confusion::fdr,       Confusion::false_omission, Confusion::npv,  Confusion::fallout,
    Confusion::specificity, Confusion::missrate};

std::string_view confusion_name(Confusion kind);
/// Throws Error(UnknownKind).
Confusion parse_confusion(std::string_view name);

/// psi_l(x) and h_l(x).
StaticFormula predicted(const std::string& label);
StaticFormula actual(const std::string& label);

DatasetFormula confusion(Confusion kind, const std::string& label, IntervalSet interval);

/// (h(x,y) & psi(x,yhat)) ~> ExpLoss{loss} <= bound
DatasetFormula generalization_error(const std::string& loss, Rational bound);

/// K{r}(h_l(x) ~> P_I !psi_lt(x))
DatasetFormula target_robust(const std::string& label, const std::string& target,
                             IntervalSet interval, const std::string& relation);

/// K{r} recall_l,I
DatasetFormula total_robust(const std::string& label, IntervalSet interval,
                            const std::string& relation);

DatasetFormula robust_variant(Confusion kind, const std::string& label, IntervalSet interval,
                              const std::string& relation);

/// eta_G(x), or its negation for the complement of G.
struct GroupRef {
  std::string symbol;
  bool complement = false;

  static GroupRef of(std::string symbol) { return {std::move(symbol), false}; }
  static GroupRef complement_of(std::string symbol) { return {std::move(symbol), true}; }

  StaticFormula formula() const;
};

DatasetFormula group_fairness(const GroupRef& g0, const GroupRef& g1, Rational epsilon);

/// Conjunction over `labels`, left-folded in the given order. Throws
/// std::invalid_argument for an empty label list.
DatasetFormula equalized_odds(const GroupRef& g0, const GroupRef& g1, Rational epsilon,
                              const std::vector<std::string>& labels);

DatasetFormula equal_opportunity(const std::string& g0, const std::string& label);

DatasetFormula sufficiency(const GroupRef& g0, const GroupRef& g1, Rational epsilon,
                           const std::vector<std::string>& labels);

}  // namespace mlspec::templates
