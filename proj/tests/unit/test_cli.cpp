#include <cstdlib>
#include <filesystem>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "mlspec/cli.hpp"
#include "mlspec/error.hpp"
#include "mlspec/io/config.hpp"
#include "mlspec/parser.hpp"
#include "mlspec/templates.hpp"

using namespace mlspec;
using json = nlohmann::json;

namespace {

const std::string kExample = std::string(MLSPEC_FIXTURES_DIR) + "/weather";
const std::string kFair = std::string(MLSPEC_FIXTURES_DIR) + "/fairness";

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "mlspec");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("exit codes") {
  std::string model = kExample + "/model.json";
  CHECK(invoke({"eval", "-m", model, "-w", "sunny", "h_l(x) ~> P=0.95 psi_l(x)"}).code == 0);
  CHECK(invoke({"eval", "-m", model, "-w", "sunny", "h_l(x) ~> P=0.9 psi_l(x)"}).code == 1);
  CHECK(invoke({"eval", "-m", model, "sunny(x) ~> P[0,1] true"}).code == 1);  // empty cell in snowy
  CHECK(invoke({"eval", "-m", model, "-w", "sunny", "h_l(x) ~> P=0.95 psi_l(x"}).code == 2);
  CHECK(invoke({"eval", "-m", model, "-w", "nowhere", "P=1 true"}).code == 2);
  CHECK(invoke({"eval", "-m", kExample + "/missing.json", "P=1 true"}).code == 2);
  CHECK(invoke({"eval", "-m", model}).code == 2);
  CHECK(invoke({"frobnicate"}).code == 2);
  CHECK(invoke({"--help"}).code == 0);
  CHECK(invoke({"check", "-m", model, "-s", kExample + "/spec.json"}).code == 0);
  CHECK(invoke({"check", "-m", kFair + "/model.json", "-s", kFair + "/spec.json"}).code == 1);
  CHECK(invoke({"check", "-m", kFair + "/model.json", "-s", kFair + "/spec.json", "--only", "separation"}).code == 0);
  CHECK(invoke({"check", "-m", kFair + "/model.json", "-s", kFair + "/spec.json", "--only", "opportunity"}).code == 1);
  CHECK(invoke({"check", "-m", kFair + "/model.json", "-s", kFair + "/spec.json", "--only", "nope"}).code == 2);
}

TEST_CASE("syntax errors point at the offending token") {
  Run r = invoke({"eval", "-m", kExample + "/model.json", "-w", "test", "sunny(x) ~> (h_l(x) ~> P=0.95 psi_l(x)"});
  CHECK(r.code == 2);
  CHECK(r.err.find("error [SyntaxError]") != std::string::npos);
  CHECK(r.err.find("line 1, column 39") != std::string::npos);
  CHECK(r.err.find("expected ')'") != std::string::npos);

  Run j = invoke({"eval", "--json", "-m", kExample + "/model.json", "-w", "test", "P=1 nope(x)"});
  json doc = json::parse(j.out);
  CHECK(doc["error"]["code"] == "UnknownSymbol");
  CHECK(doc["error"]["line"] == 1);
  CHECK(doc["error"]["column"] == 5);
}

TEST_CASE("check output") {
  Run r = invoke({"check", "-m", kExample + "/model.json", "-s", kExample + "/spec.json"});
  CHECK(r.out.find("PASS sunny_recall  [test]  sunny(x) ~> h_l(x) ~> P=0.95 psi_l(x)") != std::string::npos);
  CHECK(r.out.find("Pr = 19/20 (0.95)") != std::string::npos);
  CHECK(r.out.find("Pr = 4/5 (0.8)") != std::string::npos);
  CHECK(r.out.find("all checks hold") != std::string::npos);

  Run j = invoke({"check", "--json", "-m", kExample + "/model.json", "-s", kExample + "/spec.json"});
  json doc = json::parse(j.out);
  CHECK(doc["holds"] == true);
  REQUIRE(doc["checks"].size() == 4);
  const json& first = doc["checks"][0];
  CHECK(first["name"] == "sunny_recall");
  CHECK(first["world"] == "test");
  CHECK(first["holds"] == true);
  CHECK(first["failing_world"].is_null());
  const json& last = first["quantities"].back();
  CHECK(last["name"] == "Pr");
  CHECK(last["exact"] == "19/20");
  CHECK(last["decimal"] == "0.95");
  CHECK(last["world"] == "test|sunny(x)|h_l(x)");
  CHECK_FALSE(first.contains("trace"));

  Run one = invoke({"check", "--json", "--only", "snowy_world_recall", "-m", kExample + "/model.json", "-s",
                 kExample + "/spec.json"});
  json d1 = json::parse(one.out);
  REQUIRE(d1["checks"].size() == 1);
  CHECK(d1["checks"][0]["name"] == "snowy_world_recall");
}

TEST_CASE("failing checks name the first failing world") {
  Run j = invoke({"eval", "--json", "--trace", "-m", kExample + "/model.json", "P(0.5,1] psi_l(x)"});
  CHECK(j.code == 1);
  json doc = json::parse(j.out);
  const json& c = doc["checks"][0];
  CHECK(c["holds"] == false);
  CHECK(c["failing_world"] == "snowy");
  CHECK(c["trace"]["world"] == "all");
  CHECK(c["trace"]["children"].size() == 3);
}

TEST_CASE("report") {
  Run r = invoke({"report", "--json", "-m", kFair + "/model.json", "-w", "people", "-l", "pos", "-g", "men,women"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["rows"] == 10);
  for (const char* k : {"precision", "recall", "accuracy", "specificity", "npv"}) {
    CHECK(doc["confusion"][k]["exact"] == "4/5");
  }
  CHECK(doc["fairness"]["independence"]["exact"] == "1/5");
  CHECK(doc["fairness"]["separation"]["pos"]["exact"] == "1/3");
  CHECK(doc["fairness"]["sufficiency"]["neg"]["exact"] == "1/3");

  // Every reported quantity is the one its template checks.
  io::LoadedModel lm = io::load_model(kFair + "/model.json");
  for (templates::Confusion k : templates::all_confusions) {
    std::string name(templates::confusion_name(k));
    std::string exact = doc["confusion"][name]["exact"];
    DatasetFormula f = templates::confusion(k, "pos", IntervalSet::point(parse_rational(exact)));
    Run e = invoke({"eval", "-m", kFair + "/model.json", "-w", "people", print(f)});
    CHECK_MESSAGE(e.code == 0, name);
  }
  Run text = invoke({"report", "-m", kFair + "/model.json", "-w", "people", "-l", "pos"});
  CHECK(text.out.find("precision    4/5 (0.8)") != std::string::npos);
  CHECK(invoke({"report", "-m", kFair + "/model.json", "-w", "people", "-l", "cat"}).code == 2);
  CHECK(invoke({"report", "-m", kFair + "/model.json", "-w", "people", "-l", "pos", "-g", "men,nobody"}).code == 2);
}

TEST_CASE("spec files") {
  io::LoadedModel lm = io::load_model(kFair + "/model.json");
  const DistributionalModel& m = lm.model;
  auto code = [&](const std::string& text) {
    try {
      cli::parse_spec(text, m);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ParseError;
  };
  CHECK(code(R"({"checks": [{"name": "a", "template": {"kind": "f1", "params": {}}}]})") == ErrorCode::UnknownKind);
  CHECK(code(R"({"checks": [{"name": "a", "formula": "P=1 true"}, {"name": "a", "formula": "P=1 true"}]})") ==
        ErrorCode::ConfigError);
  CHECK(code(R"({"checks": [{"name": "a"}]})") == ErrorCode::ConfigError);
  CHECK(code(R"({"checks": [{"name": "a", "formula": "P=1 true", "template": {"kind": "recall"}}]})") ==
        ErrorCode::ConfigError);
  CHECK(code(R"({"checks": [{"name": "a", "formula": "P=1 (true"}]})") == ErrorCode::SyntaxError);
  CHECK(code(R"({"checks": [{"name": "a", "template": {"kind": "recall", "params": {"label": "cat", "interval": "=1"}}}]})") ==
        ErrorCode::UnknownLabel);
  CHECK(code(R"({"checks": [{"name": "a", "template": {"kind": "group_fairness", "params": {"g0": "men", "g1": "aliens", "epsilon": 0}}}]})") ==
        ErrorCode::UnknownGroup);
  CHECK(code(R"({"checks": [{"name": "a", "template": {"kind": "total_robust", "params": {"label": "pos", "interval": "=1", "relation": "r"}}}]})") ==
        ErrorCode::UnknownRelation);
  CHECK(code(R"({"checks": [{"name": "a", "template": {"kind": "generalization_error", "params": {"loss": "hinge", "bound": 1}}}]})") ==
        ErrorCode::UnknownLoss);

  auto checks = cli::parse_spec(
      R"({"checks": [{"name": "eo", "template": {"kind": "equal_opportunity", "params": {"g0": "men", "label": "pos"}}, "world": "people"}]})",
      m);
  REQUIRE(checks.size() == 1);
  CHECK(checks[0].world == "people");
  CHECK(checks[0].formula == templates::equal_opportunity("men", "pos"));
  CHECK(cli::build_template("recall", R"({"label": "pos", "interval": "(0.95,1]"})", m) ==
        templates::confusion(templates::Confusion::recall, "pos",
                             IntervalSet({Interval{Rational(19, 20), 1, false, true}})));
  CHECK(cli::build_template("target_robust", R"({"label": "pos", "target": "neg", "interval": "[0.9,1]", "relation": "r"})",
                            [&] {
                              DistributionalModel copy = m;
                              copy.relations["r"] = {};
                              return copy;
                            }()) ==
        templates::target_robust("pos", "neg", IntervalSet::closed(Rational(9, 10), 1), "r"));
}

TEST_CASE("the installed binary") {
  std::string cmd = std::string("\"") + MLSPEC_CLI_PATH + "\" eval -m \"" + kExample +
                    "/model.json\" -w test \"sunny(x) ~> (h_l(x) ~> P=0.95 psi_l(x))\" >/dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
