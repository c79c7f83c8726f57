#include "doctest.h"
#include "generators.hpp"
#include "mlspec/error.hpp"
#include "mlspec/evaluator.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace mlspec;

namespace {

State row(const std::string& x, const std::string& y, const std::string& yhat) {
  return State{{"x", Value::label(x)}, {"y", Value::label(y)}, {"yhat", Value::label(yhat)}};
}

World repeat(std::vector<std::pair<State, std::uint64_t>> entries, const std::string& name) {
  return World::from_counts(std::move(entries), name);
}

}  // namespace

TEST_CASE("a world with 20% positive predictions") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "l", "l"), 2}, {row("b", "n", "n"), 8}}, "w"));
  Evaluator ev(m);
  const World& w = m.world("w");
  CHECK(ev.eval(w, parse("P=0.2 psi_l(x)", m.declarations())).holds);
  CHECK(ev.eval(w, parse("P=1/5 psi_l(x)", m.declarations())).holds);
  CHECK_FALSE(ev.eval(w, parse("P=0.3 psi_l(x)", m.declarations())).holds);
  CHECK_FALSE(ev.eval(w, parse("P(0.2,1] psi_l(x)", m.declarations())).holds);
  CHECK(ev.eval(w, parse("P[0,0.1] u [0.2,0.2] psi_l(x)", m.declarations())).holds);
  CHECK(ev.prob_of(w, parse_static("psi_l(x) & h_l(x)", m.declarations())) == Rational(1, 5));

  Verdict v = ev.eval(w, parse("P=0.2 psi_l(x)", m.declarations()), {.trace = true});
  REQUIRE(v.trace);
  REQUIRE(v.trace->quantities.size() == 1);
  CHECK(v.trace->quantities[0].name == "Pr");
  CHECK(std::get<Rational>(v.trace->quantities[0].value) == Rational(1, 5));
  CHECK(v.trace->formula == "P=0.2 psi_l(x)");
}

TEST_CASE("conditioning on an empty cell is false") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "n", "n"), 3}}, "w"));
  Evaluator ev(m);
  Declarations d = m.declarations();
  const World& w = m.world("w");
  CHECK_FALSE(ev.eval(w, parse("h_l(x) ~> P[0,1] true", d)).holds);
  CHECK_FALSE(ev.eval(w, parse("false ~> P[0,1] true", d)).holds);
  CHECK(ev.eval(w, parse("P=0 h_l(x)", d)).holds);
  Verdict v = ev.eval(w, parse("h_l(x) ~> P[0,1] true", d), {.trace = true});
  CHECK(v.trace->note == "empty conditioning cell");
  CHECK_FALSE(ev.eval(w, parse("h_l(x) ~[yhat; 1; tv]~ true", d)).holds);
  CHECK(ev.eval(w, parse("true ~[yhat; 0; tv]~ h_n(x)", d)).holds);
}

TEST_CASE("knowledge over an explicit relation") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "l", "l"), 1}}, "good"));
  m.add_world(repeat({{row("a", "l", "n"), 1}}, "bad"));
  m.add_world(repeat({{row("a", "l", "l"), 1}}, "lonely"));
  m.relations["r"] = {{"good", "good"}, {"good", "bad"}, {"bad", "good"}};
  Evaluator ev(m);
  Declarations d = m.declarations();
  DatasetFormula f = parse("K{r} P=1 psi_l(x)", d);
  CHECK_FALSE(ev.eval(m.world("good"), f).holds);
  CHECK(ev.eval(m.world("bad"), f).holds);
  Verdict v = ev.eval(m.world("lonely"), f, {.trace = true});
  CHECK(v.holds);
  CHECK(v.trace->accessible == 0u);
  CHECK(v.trace->note == "relative to declared universe; 0 accessible (vacuous)");
  Verdict g = ev.eval(m.world("good"), f, {.trace = true});
  CHECK(g.trace->accessible == 2u);
  CHECK(g.trace->children.size() == 2);
  // Worlds derived by conditioning are not in the universe.
  CHECK(ev.eval(m.world("good"), parse("h_l(x) ~> K{r} P=0 true", d)).holds);
  // Duality on fixtures.
  for (const auto& name : {"good", "bad", "lonely"}) {
    DatasetFormula body = parse("P=1 psi_l(x)", d);
    CHECK(ev.eval(m.world(name), possibly("r", body)).holds ==
          ev.eval(m.world(name), !DatasetFormula::know("r", !body)).holds);
  }
  CHECK(ev.eval(m.world("good"), parse("Dia{r} P=0 psi_l(x)", d)).holds);
  CHECK_FALSE(ev.eval(m.world("lonely"), parse("Dia{r} P[0,1] true", d)).holds);
}

TEST_CASE("eval_all reports the first failing world by name") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "l", "n"), 1}}, "zeta"));
  m.add_world(repeat({{row("a", "l", "l"), 1}}, "alpha"));
  m.add_world(repeat({{row("a", "l", "n"), 1}}, "mid"));
  Evaluator ev(m);
  Verdict v = ev.eval_all(parse("P=1 psi_l(x)", m.declarations()), {.trace = true});
  CHECK_FALSE(v.holds);
  CHECK(v.failing_world == "mid");
  CHECK(v.trace->world == "all");
  CHECK(v.trace->children.size() == 3);
  CHECK(ev.eval_all(parse("P=1 h_l(x)", m.declarations())).holds);
}

TEST_CASE("expected loss") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "l", "l"), 3}, {row("b", "l", "n"), 1}}, "w"));
  Evaluator ev(m);
  Declarations d = m.declarations();
  CHECK(ev.eval(m.world("w"), parse("ExpLoss{zero_one} <= 1/4", d)).holds);
  CHECK_FALSE(ev.eval(m.world("w"), parse("ExpLoss{zero_one} <= 1/5", d)).holds);
  CHECK(ev.eval(m.world("w"), parse("h_n(x) ~> P[0,1] true", d)).holds == false);
  CHECK_THROWS_AS(ev.eval(m.world("w"), parse("ExpLoss{label_distance} <= 1", d)), Error);
}

TEST_CASE("transforms run on the current world") {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  m.add_world(repeat({{row("a", "l", "l"), 1}}, "w"));
  m.transforms["flip"] = [](const World& w) {
    std::vector<std::pair<State, std::uint64_t>> out;
    for (std::size_t i = 0; i < w.size(); ++i) {
      out.push_back({w.states()[i].with("yhat", Value::label("n")), w.counts()[i]});
    }
    return World::from_counts(std::move(out), w.name());
  };
  m.relations["r"] = {{"w", "w"}};
  Evaluator ev(m);
  Declarations d = m.declarations();
  CHECK(ev.eval(m.world("w"), parse("<T:flip> P=1 psi_n(x)", d)).holds);
  CHECK(ev.eval(m.world("w"), parse("P=1 psi_l(x)", d)).holds);
  // The transformed world is outside the universe, so K is vacuous there.
  CHECK(ev.eval(m.world("w"), parse("<T:flip> K{r} P=0 true", d)).holds);
}

TEST_CASE("missing predictions") {
  DistributionalModel m;
  m.label_alphabet = {"l"};
  m.add_world(World::from_rows(std::vector<State>{State{{"x", Value::label("a")}, {"y", Value::label("l")}}}, "w"));
  Evaluator ev(m);
  Declarations d = m.declarations();
  CHECK(ev.eval(m.world("w"), parse("P=1 h_l(x)", d)).holds);
  for (const char* text : {"P=1 psi_l(x)", "P=1 psi(x,yhat)", "true ~[yhat; 0; tv]~ true",
                           "ExpLoss{zero_one} <= 1"}) {
    try {
      ev.eval(m.world("w"), parse(text, d));
      FAIL("no error for " << text);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MissingPredictions);
    }
  }
}

TEST_CASE("conditional probabilities match counting") {
  gen::Rng rng(11);
  DistributionalModel m = oracle::reference_model();
  Evaluator ev(m);
  for (int trial = 0; trial < 60; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 1000)), 2, 3, {"a", "b"});
    World w = gen::world(rows, "w");
    StaticFormula guard = gen::static_formula(rng, 2);
    StaticFormula body = gen::static_formula(rng, 2);
    IntervalSet interval = gen::interval_set(rng);
    auto expected = oracle::conditional(
        rows, [&](const oracle::Row& r) { return oracle::static_holds(r, guard); },
        [&](const oracle::Row& r) { return oracle::static_holds(r, body); });
    bool got = ev.eval(w, DatasetFormula::cond(guard, DatasetFormula::prob(interval, body))).holds;
    CHECK(got == (expected >= 0 && interval.contains(expected)));
    if (expected >= 0) {
      auto sub = ev.restrict(w, guard);
      REQUIRE(sub);
      CHECK(ev.prob_of(*sub, body) == expected);
    } else {
      CHECK_FALSE(ev.restrict(w, guard));
    }
  }
}

TEST_CASE("indistinguishability matches direct divergence") {
  gen::Rng rng(12);
  DistributionalModel m = oracle::reference_model();
  Evaluator ev(m);
  const char* vars[] = {"y", "yhat", "x"};
  for (int trial = 0; trial < 60; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 300)), 2, 2, {"a", "b"});
    World w = gen::world(rows, "w");
    StaticFormula lhs = gen::static_formula(rng, 2);
    StaticFormula rhs = gen::static_formula(rng, 2);
    std::string var = vars[gen::uniform(rng, 0, 2)];
    auto mu0 = oracle::conditional_marginal(rows, [&](const oracle::Row& r) { return oracle::static_holds(r, lhs); },
                                            [&](const oracle::Row& r) { return oracle::key_of(r, var); });
    auto mu1 = oracle::conditional_marginal(rows, [&](const oracle::Row& r) { return oracle::static_holds(r, rhs); },
                                            [&](const oracle::Row& r) { return oracle::key_of(r, var); });
    for (const Rational& eps : {Rational(0), Rational(1, 10), Rational(1, 2)}) {
      bool got = ev.eval(w, DatasetFormula::indist(lhs, rhs, var, eps, DivergenceSpec::tv())).holds;
      bool expected = !mu0.empty() && !mu1.empty() && oracle::tv_sup(mu0, mu1) <= eps;
      CHECK(got == expected);
      if (eps == 0) CHECK(got == (!mu0.empty() && mu0 == mu1));
    }
  }
}

TEST_CASE("interval monotonicity and determinism") {
  gen::Rng rng(13);
  DistributionalModel m = oracle::reference_model();
  Evaluator ev(m);
  for (int trial = 0; trial < 100; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 50)), 2, 3, {"a", "b"});
    World w = gen::world(rows, "w");
    StaticFormula body = gen::static_formula(rng, 2);
    IntervalSet narrow = gen::interval_set(rng);
    IntervalSet wide = gen::interval_set(rng);
    if (!narrow.subset_of(wide)) std::swap(narrow, wide);
    if (narrow.subset_of(wide) &&
        ev.eval(w, DatasetFormula::prob(narrow, body)).holds) {
      CHECK(ev.eval(w, DatasetFormula::prob(wide, body)).holds);
    }
    CHECK(ev.eval(w, DatasetFormula::prob(IntervalSet::closed(0, 1), body)).holds);
    DatasetFormula f = gen::dataset_formula(rng, 3);
    m.add_world(w);
    // Random formulas may apply an lp metric to labels; that error must be
    // just as repeatable as a verdict.
    auto outcome = [&]() -> std::string {
      try {
        Verdict v = ev.eval(w, f, {.trace = true});
        return (v.holds ? "1/" : "0/") + std::to_string(v.trace->children.size());
      } catch (const Error& e) {
        return std::string(e.what());
      }
    };
    CHECK(outcome() == outcome());
  }
}

TEST_CASE("sugar evaluates like its definition") {
  gen::Rng rng(14);
  DistributionalModel m = oracle::reference_model();
  Evaluator ev(m);
  for (int trial = 0; trial < 100; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 50)), 2, 3, {"a", "b"});
    World w = gen::world(rows, "w");
    DatasetFormula a = DatasetFormula::prob(gen::interval_set(rng), gen::static_formula(rng, 2));
    DatasetFormula b = DatasetFormula::prob(gen::interval_set(rng), gen::static_formula(rng, 2));
    bool va = ev.eval(w, a).holds;
    bool vb = ev.eval(w, b).holds;
    CHECK(ev.eval(w, a | b).holds == (va || vb));
    CHECK(ev.eval(w, implies(a, b)).holds == (!va || vb));
    CHECK(ev.eval(w, iff(a, b)).holds == (va == vb));
    CHECK(ev.eval(w, a & !a).holds == false);
  }
}
