// Acceptance suite: one line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

#include "generators.hpp"
#include "json.hpp"
#include "mlspec/divergence.hpp"
#include "mlspec/evaluator.hpp"
#include "mlspec/parser.hpp"
#include "mlspec/templates.hpp"
#include "oracles.hpp"
#include "reference.hpp"

using namespace mlspec;
using Clock = std::chrono::steady_clock;

namespace {

const std::string kCli = MLSPEC_CLI_PATH;
const std::string kUnit = MLSPEC_UNIT_PATH;
const std::string kFixtures = MLSPEC_FIXTURES_DIR;

std::string quote(const std::string& s) { return "'" + s + "'"; }

// Exit status of a shell command.
int shell(const std::string& cmd) {
  int status = std::system(cmd.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

// Standard output of a shell command.
std::string capture(const std::string& cmd) {
  std::string out;
  FILE* p = ::popen(cmd.c_str(), "r");
  if (!p) return out;
  char buf[4096];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
  ::pclose(p);
  return out;
}

Distribution from_keys(const std::map<std::string, mpq_class>& mu) {
  std::map<Value, Rational> m;
  for (const auto& [k, q] : mu) m[Value::label(k)] = q;
  return Distribution::over_values(m);
}

Distribution from_points(const std::vector<oracle::Weighted>& pts, bool labels) {
  std::map<Value, Rational> m;
  for (const auto& p : pts) {
    if (labels) {
      m[Value::label(p.point[0].get_str())] = p.mass;
    } else {
      m[Value::numbers(p.point)] = p.mass;
    }
  }
  return Distribution::over_values(m);
}

struct Failure {
  std::string why;
};

void require(bool ok, const std::string& why) {
  if (!ok) throw Failure{why};
}

// --------------------------------------------------------------- criteria

void tv_equivalence() {
  gen::Rng rng(1001);
  for (int trial = 0; trial < 500; ++trial) {
    auto a = gen::distribution(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 12)), 12);
    auto b = gen::distribution(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 12)), 12);
    require(total_variation(from_keys(a), from_keys(b)) == oracle::tv_sup(a, b),
            "mismatch at pair " + std::to_string(trial));
  }
}

void winf_equivalence() {
  gen::Rng rng(1002);
  struct Case {
    oracle::Ground ground;
    MetricSpec metric;
    bool labels;
  };
  const Case cases[] = {{oracle::Ground::discrete, MetricSpec::discrete(), true},
                        {oracle::Ground::l1, MetricSpec::lp(1), false},
                        {oracle::Ground::l2, MetricSpec::lp(2), false}};
  for (const Case& c : cases) {
    for (int trial = 0; trial < 300; ++trial) {
      std::size_t dims = c.labels ? 1 : static_cast<std::size_t>(gen::uniform(rng, 1, 2));
      auto p0 = gen::points(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 8)), dims, 6);
      auto p1 = gen::points(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 8)), dims, 6);
      Distance d = wasserstein_inf(from_points(p0, c.labels), from_points(p1, c.labels), c.metric);
      mpq_class expected = oracle::winf_hall(c.ground, p0, p1);
      // l2 thresholds are compared squared.
      bool ok = c.ground == oracle::Ground::l2 ? d.power() == expected && d.root() == 2
                                                : d == Distance(expected);
      require(ok, "mismatch at pair " + std::to_string(trial) + " (" + c.metric.to_string() + ")");
    }
  }
}

void semantics_vs_counting() {
  gen::Rng rng(1003);
  DistributionalModel m;
  m.label_alphabet = {"a", "b"};
  Evaluator ev(m);
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 1000)), 2, 5, {"a", "b"});
    World w = gen::world(rows, "w");
    for (templates::Confusion k : templates::all_confusions) {
      std::string label = gen::uniform(rng, 0, 1) ? "a" : "b";
      IntervalSet interval = gen::interval_set(rng);
      mpq_class rate = oracle::confusion_rate(std::string(templates::confusion_name(k)), rows, label);
      bool expected = rate >= 0 && interval.contains(rate);
      bool got = ev.eval(w, templates::confusion(k, label, interval)).holds;
      require(got == expected, "world " + std::to_string(trial) + ", " +
                                   std::string(templates::confusion_name(k)));
    }
  }
}

void indist_vs_divergence() {
  gen::Rng rng(1004);
  DistributionalModel m = oracle::reference_model();
  Evaluator ev(m);
  const char* vars[] = {"y", "yhat", "x"};
  for (int trial = 0; trial < 200; ++trial) {
    auto rows = gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 200)), 2, 2, {"a", "b"});
    World w = gen::world(rows, "w");
    StaticFormula lhs = gen::static_formula(rng, 2);
    StaticFormula rhs = gen::static_formula(rng, 2);
    std::string var = vars[gen::uniform(rng, 0, 2)];
    auto key = [&](const oracle::Row& r) { return oracle::key_of(r, var); };
    auto mu0 = oracle::conditional_marginal(rows, [&](const oracle::Row& r) { return oracle::static_holds(r, lhs); }, key);
    auto mu1 = oracle::conditional_marginal(rows, [&](const oracle::Row& r) { return oracle::static_holds(r, rhs); }, key);
    bool defined = !mu0.empty() && !mu1.empty();
    mpq_class tv = defined ? oracle::tv_sup(mu0, mu1) : mpq_class(-1);
    for (int k = 0; k <= 4; ++k) {
      mpq_class eps(k, 4);
      eps.canonicalize();
      bool got = ev.eval(w, DatasetFormula::indist(lhs, rhs, var, eps, DivergenceSpec::tv())).holds;
      require(got == (defined && tv <= eps), "fixture " + std::to_string(trial));
      if (k == 0) require(got == (defined && mu0 == mu1), "identity case, fixture " + std::to_string(trial));
    }
  }
}

void relationship() {
  gen::Rng rng(1005);
  const std::vector<std::string> labels{"a", "b", "c"};
  int nontrivial = 0;
  for (int trial = 0; trial < 200; ++trial) {
    DistributionalModel m;
    m.label_alphabet = {labels.begin(), labels.end()};
    std::size_t worlds = static_cast<std::size_t>(gen::uniform(rng, 1, 5));
    Relation r;
    for (std::size_t i = 0; i < worlds; ++i) {
      std::string name = "w" + std::to_string(i);
      m.add_world(gen::world(gen::rows(rng, static_cast<std::size_t>(gen::uniform(rng, 1, 200)), 1, 4, labels), name));
      r.insert({name, name});
    }
    for (std::size_t i = 0; i < worlds; ++i) {
      for (std::size_t j = 0; j < worlds; ++j) {
        if (gen::uniform(rng, 0, 2) == 0) r.insert({"w" + std::to_string(i), "w" + std::to_string(j)});
      }
    }
    m.relations["r"] = r;
    Evaluator ev(m);
    for (const auto& [name, w] : m.worlds) {
      for (const auto& l : labels) {
        Rational lo(static_cast<long>(gen::uniform(rng, 0, 10)), 10);
        lo.canonicalize();
        IntervalSet i({Interval{lo, 1, gen::uniform(rng, 0, 1) == 1 || lo == 1, true}});
        if (!ev.eval(w, templates::total_robust(l, i, "r")).holds) continue;
        ++nontrivial;
        require(ev.eval(w, templates::confusion(templates::Confusion::recall, l, i)).holds,
                "recall fails on " + name + " in universe " + std::to_string(trial));
        for (const auto& t : labels) {
          if (t == l) continue;
          require(ev.eval(w, templates::target_robust(l, t, i, "r")).holds,
                  "targeted robustness fails on " + name + " in universe " + std::to_string(trial));
        }
      }
    }
  }
  require(nontrivial > 0, "total robustness never held; the search found nothing to test");
}

void weather_example() {
  std::string dir = kFixtures + "/weather";
  std::string base = quote(kCli) + " eval -m " + quote(dir + "/model.json");
  require(shell(base + " -w test " + quote("sunny(x) ~> (h_l(x) ~> P=0.95 psi_l(x))") + " >/dev/null") == 0,
          "sunny recall 0.95 does not hold");
  require(shell(base + " -w test " + quote("snowy(x) ~> (h_l(x) ~> P=0.8 psi_l(x))") + " >/dev/null") == 0,
          "snowy recall 0.8 does not hold");
  require(shell(base + " -w test " + quote("sunny(x) ~> (h_l(x) ~> P=0.8 psi_l(x))") + " >/dev/null") == 1,
          "sunny recall 0.8 should fail");
  require(shell(quote(kCli) + " check -m " + quote(dir + "/model.json") + " -s " + quote(dir + "/spec.json") +
                " >/dev/null") == 0,
          "example spec does not hold");
}

void probability_example() {
  DistributionalModel m;
  m.label_alphabet = {"l", "n"};
  std::vector<std::pair<State, std::uint64_t>> entries;
  for (int i = 0; i < 10; ++i) {
    Value yhat = Value::label(i < 2 ? "l" : "n");
    entries.push_back({State{{"x", Value::number(i)}, {"y", Value::label("l")}, {"yhat", yhat}}, 1});
  }
  m.add_world(World::from_counts(std::move(entries), "w"));
  Evaluator ev(m);
  Declarations d = m.declarations();
  require(ev.eval(m.world("w"), parse("P=0.2 psi_l(x)", d)).holds, "P=0.2 psi_l(x) does not hold");
  require(!ev.eval(m.world("w"), parse("P=0.25 psi_l(x)", d)).holds, "P=0.25 psi_l(x) holds");
}

void robustness_workflow() {
  std::string dir = kFixtures + "/robustness";
  auto run = [&](const std::string& model) {
    return capture(quote(kCli) + " check --json --only robust_recall -m " + quote(dir + "/" + model) + " -s " +
                   quote(dir + "/spec.json") + " 2>&1");
  };
  nlohmann::json robust = nlohmann::json::parse(run("model_robust.json"));
  nlohmann::json brittle = nlohmann::json::parse(run("model_brittle.json"));
  const auto& rk = robust["checks"][0]["know"];
  require(!rk.empty() && rk[0]["accessible"].get<int>() >= 2, "knowledge check is vacuous");
  require(robust["holds"] == true, "robust classifier fails");
  require(brittle["holds"] == false, "brittle classifier passes");
  require(shell(quote(kCli) + " check --only base_recall -m " + quote(dir + "/model_brittle.json") + " -s " +
                quote(dir + "/spec.json") + " >/dev/null") == 0,
          "brittle classifier should be accurate on the base world");
}

void round_trip() {
  gen::Rng rng(1006);
  Declarations d = gen::ast_declarations();
  for (int i = 0; i < 1000; ++i) {
    DatasetFormula f = gen::dataset_formula(rng, 4);
    std::string text = print(f);
    require(parse(text, d) == f, "round-trip changed: " + text);
  }
}

}  // namespace

int main() {
  struct Criterion {
    std::string name;
    double budget;  // seconds
    std::function<void()> run;
  };
  const std::vector<Criterion> criteria{
      {"total variation equals the subset supremum (500 pairs)", 10, tv_equivalence},
      {"W-infinity equals the Hall threshold (300 pairs x discrete/l1/l2)", 60, winf_equivalence},
      {"confusion templates agree with counting (200 worlds)", 30, semantics_vs_counting},
      {"indistinguishability agrees with direct divergence (200 fixtures)", 10, indist_vs_divergence},
      {"total robustness implies targeted robustness and recall (200 universes)", 60, relationship},
      {"weather example through the CLI", 1, weather_example},
      {"a 20% positive world satisfies P=0.2 psi_l(x)", 1, probability_example},
      {"robustness workflow flips with the classifier", 30, robustness_workflow},
      {"print then parse is the identity (1000 formulas)", 10, round_trip},
  };

  auto suite_start = Clock::now();
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = Clock::now();
    std::string why;
    try {
      c.run();
    } catch (const Failure& f) {
      why = f.why;
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(Clock::now() - start).count();
    if (why.empty() && secs >= c.budget) why = "over the " + std::to_string(static_cast<int>(c.budget)) + " s budget";
    std::printf("[%s] %s (%.2f s)%s%s\n", why.empty() ? "PASS" : "FAIL", c.name.c_str(), secs,
                why.empty() ? "" : ": ", why.c_str());
    std::fflush(stdout);
    if (!why.empty()) ++failed;
  }

  // The unit suite plus this one must fit in five minutes.
  auto unit_start = Clock::now();
  int unit = shell(quote(kUnit) + " >/dev/null 2>&1");
  double unit_secs = std::chrono::duration<double>(Clock::now() - unit_start).count();
  double total = std::chrono::duration<double>(Clock::now() - suite_start).count();
  bool ok = unit == 0 && total < 300;
  std::printf("[%s] full suite under five minutes (%.2f s, unit tests %.2f s)%s\n", ok ? "PASS" : "FAIL", total,
              unit_secs, unit == 0 ? "" : ": unit tests failed");
  if (!ok) ++failed;
  return failed == 0 ? 0 : 1;
}
