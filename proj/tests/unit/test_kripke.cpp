#include <array>
#include <random>

#include "doctest.h"
#include "generators.hpp"
#include "mlspec/error.hpp"
#include "mlspec/evaluator.hpp"
#include "mlspec/world.hpp"

using namespace mlspec;

namespace {

State row(const std::string& x, const std::string& y, const std::string& yhat) {
  return State{{"x", Value::label(x)}, {"y", Value::label(y)}, {"yhat", Value::label(yhat)}};
}

}  // namespace

TEST_CASE("world_from_rows merges duplicates") {
  State s1 = row("a", "l", "l");
  State s2 = row("b", "l", "m");
  std::vector<State> rows{s1, s1, s2};
  World w = World::from_rows(rows, "w");
  CHECK(w.size() == 2);
  CHECK(w.total() == 3);
  CHECK(w.count(s1) == 2);
  CHECK(w.prob(s1) == Rational(2, 3));
  CHECK(w.prob(row("c", "l", "l")) == 0);

  std::vector<State> one{s1};
  World single = World::from_rows(one, "one");
  CHECK(single.size() == 1);
  CHECK(single.total() == 1);
}

TEST_CASE("world_from_rows errors") {
  std::vector<State> none;
  CHECK_THROWS_WITH_AS(World::from_rows(none, "e"), doctest::Contains("no rows"), Error);
  std::vector<State> mixed{row("a", "l", "l"), State{{"x", Value::label("a")}, {"y", Value::label("l")}}};
  try {
    World::from_rows(mixed, "m");
    FAIL("expected SchemaMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SchemaMismatch);
  }
}

TEST_CASE("1000 random rows over 40 distinct states") {
  std::mt19937_64 rng(7);
  std::vector<State> distinct;
  for (int i = 0; i < 40; ++i) distinct.push_back(row("x" + std::to_string(i), "l", "l"));
  std::vector<State> rows;
  std::map<int, int> expected;
  for (int i = 0; i < 1000; ++i) {
    int k = i < 40 ? i : static_cast<int>(rng() % 40);
    rows.push_back(distinct[static_cast<std::size_t>(k)]);
    ++expected[k];
  }
  World w = World::from_rows(rows, "w");
  CHECK(w.total() == 1000);
  CHECK(w.size() == 40);
  for (const auto& [k, c] : expected) CHECK(w.count(distinct[static_cast<std::size_t>(k)]) == static_cast<std::uint64_t>(c));
  Rational sum = 0;
  for (const auto& s : w.states()) sum += w.prob(s);
  CHECK(sum == 1);
}

TEST_CASE("marginals") {
  std::vector<State> rows{row("a", "l", "l"), row("b", "l", "l")};
  World w = World::from_rows(rows, "w");
  CHECK(marginal(w, "yhat") == Distribution::over_values({{Value::label("l"), 1}}));

  std::vector<State> five{row("a", "l", "l"), row("b", "l", "l"), row("c", "m", "l"), row("d", "m", "l"),
                          row("e", "m", "m")};
  World w5 = World::from_rows(five, "w5");
  Distribution d = marginal(w5, "yhat");
  CHECK(d.mass(Value::label("l")) == Rational(4, 5));
  CHECK(d.mass(Value::label("m")) == Rational(1, 5));

  std::array<std::string, 2> yy{"y", "yhat"};
  Distribution joint = marginal(w5, yy);
  CHECK(joint[{Value::label("l"), Value::label("l")}] == Rational(2, 5));
  CHECK(joint[{Value::label("m"), Value::label("l")}] == Rational(2, 5));
  CHECK(joint[{Value::label("m"), Value::label("m")}] == Rational(1, 5));
  CHECK(joint[{Value::label("l"), Value::label("m")}] == 0);

  std::array<std::string, 1> bad{"z"};
  try {
    marginal(w5, bad);
    FAIL("expected UnknownVariable");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::UnknownVariable);
  }
}

TEST_CASE("distribution validation") {
  CHECK_THROWS(Distribution({{{Value::label("a")}, Rational(1, 2)}}));
  CHECK_THROWS(Distribution({{{Value::label("a")}, Rational(3, 2)}, {{Value::label("b")}, Rational(-1, 2)}}));
}

TEST_CASE("restriction") {
  DistributionalModel m;
  m.label_alphabet = {"l", "m"};
  Evaluator ev(m);
  std::vector<State> rows;
  for (int i = 0; i < 10; ++i) rows.push_back(row("r" + std::to_string(i), i < 3 ? "l" : "m", "l"));
  World w = World::from_rows(rows, "w");

  auto same = ev.restrict(w, StaticFormula::truth());
  REQUIRE(same);
  CHECK(*same == w);

  CHECK_FALSE(ev.restrict(w, StaticFormula::falsum()));

  auto three = ev.restrict(w, StaticFormula::atom("h_l", {"x"}));
  REQUIRE(three);
  CHECK(three->total() == 3);
  for (const auto& s : three->states()) CHECK(three->prob(s) == Rational(1, 3));
}

TEST_CASE("restriction invariants on random worlds") {
  DistributionalModel m;
  m.label_alphabet = {"a", "b", "c"};
  Evaluator ev(m);
  gen::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 100)), 1, 4, {"a", "b", "c"});
    World w = gen::world(rows, "w");
    StaticFormula psi = StaticFormula::atom("h_a", {"x"}) & !StaticFormula::atom("psi_b", {"x"});
    auto r = ev.restrict(w, psi);
    auto guard = [](const oracle::Row& row) { return row.y == "a" && row.yhat != "b"; };
    if (!r) {
      CHECK(oracle::conditional(rows, guard, guard) == -1);
      continue;
    }
    // Idempotence and support.
    auto rr = ev.restrict(*r, psi);
    REQUIRE(rr);
    CHECK(*rr == *r);
    for (const auto& s : r->states()) CHECK(ev.eval_static(s, psi));
    // Marginal consistency against counting.
    auto expected = oracle::conditional_marginal(rows, guard, [](const oracle::Row& row) {
      return std::to_string(row.x[0]);
    });
    Distribution got = marginal(*r, "x");
    for (const auto& [k, q] : expected) {
      CHECK(got.mass(Value::numbers({Rational(std::stol(k))})) == q);
    }
    CHECK(got.size() == expected.size());
  }
}
