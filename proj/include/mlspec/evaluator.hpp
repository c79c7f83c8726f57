#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mlspec/formula.hpp"
#include "mlspec/kernels.hpp"
#include "mlspec/model.hpp"

namespace mlspec {

/// A named number computed while deciding a subformula.
struct Quantity {
  std::string name;
  std::variant<std::monostate, Rational, Distance> value;  // monostate = undefined
};

struct TraceNode {
  std::string formula;
  std::string world;
  bool holds = false;
  std::vector<Quantity> quantities;
  std::string note;
  /// Know nodes: number of accessible worlds in the declared universe.
  std::optional<std::size_t> accessible;
  std::vector<TraceNode> children;
};

struct Verdict {
  bool holds = false;
  std::optional<TraceNode> trace;
  /// eval_all only: the first failing world in name order.
  std::optional<std::string> failing_world;
};

struct EvalOptions {
  bool trace = false;
};

/// Decides M, w |= phi over an immutable model.
class Evaluator {
 public:
  explicit Evaluator(const DistributionalModel& model);

  /// Throws Error(UnknownPredicate) for unresolvable atoms and
  /// Error(MissingPredictions) when psi atoms meet a state without yhat.
  bool eval_static(const State& s, const StaticFormula& psi) const;

  /// One byte per distinct state of w.
  kernels::Mask static_mask(const World& w, const StaticFormula& psi) const;

  /// Pr[s <- w : s |= psi].
  Rational prob_of(const World& w, const StaticFormula& psi) const;

  /// w|psi, nullopt when no state satisfies psi.
  std::optional<World> restrict(const World& w, const StaticFormula& psi) const;

  Verdict eval(const World& w, const DatasetFormula& phi, EvalOptions options = {}) const;

  /// Conjunction over every world of the universe, visited in name order.
  Verdict eval_all(const DatasetFormula& phi, EvalOptions options = {}) const;

  const DistributionalModel& model() const noexcept { return model_; }

 private:
  bool decide(const World& w, const DatasetFormula& phi, TraceNode* trace) const;
  bool atom(const State& s, const st::Atom& a) const;

  const DistributionalModel& model_;
  Declarations decls_;
};

}  // namespace mlspec
