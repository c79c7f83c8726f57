#pragma once

// Reference semantics over plain rows for the vocabulary of
// gen::ast_declarations. Reads formula trees but evaluates them without
// the library's evaluator.

#include <string>

#include "mlspec/formula.hpp"
#include "mlspec/model.hpp"
#include "oracles.hpp"

namespace oracle {

/// eta_G0: x[0] <= 1, eta_G1: x[0] >= 2, p(x): x[1] = 0, q(x, y): y = a.
bool static_holds(const Row& r, const mlspec::StaticFormula& f);

/// Row value of y, yhat or x (as "c0,c1,").
std::string key_of(const Row& r, const std::string& variable);

/// A model whose definitions match static_holds.
mlspec::DistributionalModel reference_model();

}  // namespace oracle
