#include "mlspec/evaluator.hpp"

#include <array>

#include "mlspec/error.hpp"

namespace mlspec {

namespace {

const Value& need(const State& s, const std::string& variable) {
  if (const Value* v = s.find(variable)) return *v;
  if (variable == "yhat") {
    throw Error(ErrorCode::MissingPredictions,
                "state has no prediction (yhat); load predictions or configure a classifier adapter");
  }
  throw Error(ErrorCode::UnknownVariable, "state has no variable '" + variable + "'");
}

void require_variable(const World& w, const std::string& variable) {
  if (w.has_variable(variable)) return;
  if (variable == "yhat") {
    throw Error(ErrorCode::MissingPredictions, "world '" + w.name() +
                                                   "' has no predictions (yhat); load predictions "
                                                   "or configure a classifier adapter");
  }
  throw Error(ErrorCode::UnknownVariable,
              "world '" + w.name() + "' has no variable '" + variable + "'");
}

Rational ratio(std::uint64_t num, std::uint64_t den) {
  Rational r(mpz_class(std::to_string(num)), mpz_class(std::to_string(den)));
  r.canonicalize();
  return r;
}

}  // namespace

Evaluator::Evaluator(const DistributionalModel& model)
    : model_(model), decls_(model.declarations()) {}

bool Evaluator::atom(const State& s, const st::Atom& a) const {
  AtomKind kind;
  try {
    kind = resolve_atom(a.symbol, decls_);
  } catch (const Error& e) {
    throw Error(e.code() == ErrorCode::UnknownSymbol ? ErrorCode::UnknownPredicate : e.code(),
                e.what());
  }
  if (a.args.size() != kind.arity) {
    throw Error(ErrorCode::ArityMismatch, "'" + a.symbol + "' takes " +
                                              std::to_string(kind.arity) + " argument(s)");
  }
  using K = AtomKind::Kind;
  switch (kind.kind) {
    case K::classifier:
      return need(s, a.args[1]) == need(s, "yhat");
    case K::oracle:
      return need(s, a.args[1]) == need(s, "y");
    case K::predicted_label:
      return need(s, "yhat") == Value::label(kind.name);
    case K::true_label:
      return need(s, "y") == Value::label(kind.name);
    case K::group: {
      const Value* arg = &need(s, a.args[0]);
      return model_.groups.at(kind.name).body.holds({&arg, 1});
    }
    case K::user: {
      std::vector<const Value*> args;
      for (const auto& v : a.args) args.push_back(&need(s, v));
      return model_.predicates.at(kind.name).body.holds(args);
    }
  }
  return false;
}

bool Evaluator::eval_static(const State& s, const StaticFormula& psi) const {
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, st::Atom>) {
          return atom(s, n);
        } else if constexpr (std::is_same_v<T, st::True>) {
          return true;
        } else if constexpr (std::is_same_v<T, st::False>) {
          return false;
        } else if constexpr (std::is_same_v<T, st::Not>) {
          return !eval_static(s, n.operand);
        } else {
          return eval_static(s, n.lhs) && eval_static(s, n.rhs);
        }
      },
      psi.node().v);
}

kernels::Mask Evaluator::static_mask(const World& w, const StaticFormula& psi) const {
  const std::size_t n = w.size();
  auto scalar = [&]() {
    kernels::Mask m(n);
    auto states = w.states();
    for (std::size_t i = 0; i < n; ++i) m[i] = eval_static(states[i], psi) ? 1 : 0;
    return m;
  };
  return std::visit(
      [&](const auto& node) -> kernels::Mask {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, st::True>) {
          return kernels::Mask(n, 1);
        } else if constexpr (std::is_same_v<T, st::False>) {
          return kernels::Mask(n, 0);
        } else if constexpr (std::is_same_v<T, st::Not>) {
          return kernels::mask_not(static_mask(w, node.operand));
        } else if constexpr (std::is_same_v<T, st::And>) {
          return kernels::mask_and(static_mask(w, node.lhs), static_mask(w, node.rhs));
        } else {
          AtomKind kind;
          try {
            kind = resolve_atom(node.symbol, decls_);
          } catch (const Error&) {
            return scalar();  // reports the error with the right code
          }
          if (node.args.size() != kind.arity) return scalar();
          using K = AtomKind::Kind;
          std::string column;
          if (kind.kind == K::predicted_label) column = "yhat";
          if (kind.kind == K::true_label) column = "y";
          if (!column.empty()) {
            require_variable(w, column);
            if (const LabelColumn* col = w.label_column(column)) {
              std::int32_t code = col->code_of(kind.name);
              if (code < 0) return kernels::Mask(n, 0);
              return kernels::mask_eq(col->codes, code);
            }
            return scalar();
          }
          if (kind.kind == K::classifier && node.args[1] == "yhat") {
            require_variable(w, "yhat");
            return kernels::Mask(n, 1);
          }
          if (kind.kind == K::oracle && node.args[1] == "y") {
            require_variable(w, "y");
            return kernels::Mask(n, 1);
          }
          return scalar();
        }
      },
      psi.node().v);
}

Rational Evaluator::prob_of(const World& w, const StaticFormula& psi) const {
  kernels::Mask m = static_mask(w, psi);
  return ratio(kernels::masked_sum(w.counts(), m), w.total());
}

std::optional<World> Evaluator::restrict(const World& w, const StaticFormula& psi) const {
  return w.select(static_mask(w, psi), w.name() + "|" + print(psi));
}

bool Evaluator::decide(const World& w, const DatasetFormula& phi, TraceNode* trace) const {
  if (trace) {
    trace->formula = print(phi);
    trace->world = w.name();
  }
  auto child = [&](const World& cw, const DatasetFormula& f) -> bool {
    if (!trace) return decide(cw, f, nullptr);
    trace->children.emplace_back();
    TraceNode node;
    bool r = decide(cw, f, &node);
    trace->children.back() = std::move(node);
    return r;
  };
  auto quantity = [&](std::string name, auto value) {
    if (trace) trace->quantities.push_back({std::move(name), std::move(value)});
  };
  auto note = [&](std::string text) {
    if (trace) trace->note = std::move(text);
  };

  bool holds = std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ds::Prob>) {
          Rational p = prob_of(w, n.body);
          quantity("Pr", p);
          return n.interval.contains(p);
        } else if constexpr (std::is_same_v<T, ds::Not>) {
          return !child(w, n.operand);
        } else if constexpr (std::is_same_v<T, ds::And>) {
          bool a = child(w, n.lhs);
          if (!a && !trace) return false;
          bool b = child(w, n.rhs);
          return a && b;
        } else if constexpr (std::is_same_v<T, ds::Transform>) {
          auto it = model_.transforms.find(n.name);
          if (it == model_.transforms.end()) {
            throw Error(ErrorCode::UnknownTransform, "unknown transform '" + n.name + "'");
          }
          // Derived worlds are outside the declared universe, like w|psi.
          World next = it->second(w).renamed(n.name + "(" + w.name() + ")");
          return child(next, n.body);
        } else if constexpr (std::is_same_v<T, ds::Cond>) {
          kernels::Mask m = static_mask(w, n.guard);
          std::uint64_t mass = kernels::masked_sum(w.counts(), m);
          quantity("Pr[guard]", ratio(mass, w.total()));
          if (mass == 0) {
            note("empty conditioning cell");
            return false;
          }
          World sub = *w.select(m, w.name() + "|" + print(n.guard));
          return child(sub, n.body);
        } else if constexpr (std::is_same_v<T, ds::Indist>) {
          require_variable(w, n.variable);
          auto w0 = restrict(w, n.lhs);
          auto w1 = restrict(w, n.rhs);
          if (!w0 || !w1) {
            quantity("D", std::monostate{});
            note("empty conditioning cell");
            return false;
          }
          std::array<std::string, 1> vars{n.variable};
          Distance d;
          if (n.divergence.kind == DivergenceSpec::Kind::tv) {
            d = Distance(total_variation(marginal_counts(*w0, vars), marginal_counts(*w1, vars)));
          } else {
            const MetricSpec* fallback = model_.metric ? &*model_.metric : nullptr;
            d = divergence(n.divergence, marginal(*w0, vars), marginal(*w1, vars), fallback);
          }
          quantity("D", d);
          quantity("epsilon", n.epsilon);
          return d.at_most(n.epsilon);
        } else if constexpr (std::is_same_v<T, ds::Know>) {
          auto rel = model_.relations.find(n.relation);
          if (rel == model_.relations.end()) {
            throw Error(ErrorCode::UnknownRelation, "unknown relation '" + n.relation + "'");
          }
          std::vector<const World*> accessible;
          if (model_.worlds.count(w.name())) {
            for (auto it = rel->second.lower_bound({w.name(), ""});
                 it != rel->second.end() && it->first == w.name(); ++it) {
              accessible.push_back(&model_.world(it->second));
            }
          }
          if (trace) trace->accessible = accessible.size();
          note("relative to declared universe; " + std::to_string(accessible.size()) +
               " accessible" + (accessible.empty() ? " (vacuous)" : ""));
          bool all = true;
          for (const World* other : accessible) {
            if (!child(*other, n.body)) {
              all = false;
              if (!trace) break;
            }
          }
          return all;
        } else {
          auto loss = model_.losses.find(n.loss);
          if (loss == model_.losses.end()) {
            throw Error(ErrorCode::UnknownLoss, "unknown loss '" + n.loss + "'");
          }
          require_variable(w, "y");
          require_variable(w, "yhat");
          std::array<std::string, 2> vars{"y", "yhat"};
          MarginalCounts joint = marginal_counts(w, vars);
          Rational sum = 0;
          for (const auto& [outcome, count] : joint.counts) {
            sum += Rational(static_cast<unsigned long>(count)) * loss->second(outcome[0], outcome[1]);
          }
          Rational expected = sum / Rational(static_cast<unsigned long>(joint.total));
          quantity("E[loss]", expected);
          return expected <= n.bound;
        }
      },
      phi.node().v);
  if (trace) trace->holds = holds;
  return holds;
}

Verdict Evaluator::eval(const World& w, const DatasetFormula& phi, EvalOptions options) const {
  Verdict v;
  if (options.trace) {
    TraceNode root;
    v.holds = decide(w, phi, &root);
    v.trace = std::move(root);
  } else {
    v.holds = decide(w, phi, nullptr);
  }
  return v;
}

Verdict Evaluator::eval_all(const DatasetFormula& phi, EvalOptions options) const {
  Verdict v;
  v.holds = true;
  TraceNode root;
  root.formula = print(phi);
  root.world = "all";
  for (const auto& [name, w] : model_.worlds) {
    Verdict one = eval(w, phi, options);
    if (!one.holds) {
      if (!v.failing_world) v.failing_world = name;
      v.holds = false;
    }
    if (one.trace) root.children.push_back(std::move(*one.trace));
  }
  if (options.trace) {
    root.holds = v.holds;
    root.note = v.failing_world ? "first failing world: " + *v.failing_world
                                : std::to_string(model_.worlds.size()) + " world(s) checked";
    v.trace = std::move(root);
  }
  return v;
}

}  // namespace mlspec
