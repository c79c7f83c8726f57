#include <fstream>
#include <functional>
#include <ostream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "mlspec/cli.hpp"
#include "mlspec/error.hpp"
#include "mlspec/evaluator.hpp"
#include "mlspec/parser.hpp"
#include "mlspec/templates.hpp"

namespace mlspec::cli {

namespace {

using json = nlohmann::ordered_json;

std::string read_file(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, std::string("cannot open ") + what + " '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, where + ": " + what);
}

// ----------------------------------------------------------- rendering

json number_json(const Rational& r) {
  return {{"exact", to_exact_string(r)}, {"decimal", to_decimal(r, 12)}};
}

json quantity_json(const Quantity& q) {
  json j{{"name", q.name}};
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          j["exact"] = nullptr;
          j["decimal"] = nullptr;
          j["undefined"] = true;
        } else if constexpr (std::is_same_v<T, Rational>) {
          j["exact"] = to_exact_string(v);
          j["decimal"] = to_decimal(v, 12);
        } else {
          j["exact"] = v.exact_string();
          j["decimal"] = v.decimal();
        }
      },
      q.value);
  return j;
}

std::string quantity_text(const Quantity& q) {
  return std::visit(
      [&](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return q.name + " = undefined";
        } else if constexpr (std::is_same_v<T, Rational>) {
          return q.name + " = " + to_exact_string(v) + " (" + to_decimal(v, 12) + ")";
        } else {
          return q.name + " = " + v.exact_string() + " (" + v.decimal() + ")";
        }
      },
      q.value);
}

json trace_json(const TraceNode& t) {
  json j{{"formula", t.formula}, {"world", t.world}, {"holds", t.holds}};
  json qs = json::array();
  for (const auto& q : t.quantities) qs.push_back(quantity_json(q));
  j["quantities"] = qs;
  if (!t.note.empty()) j["note"] = t.note;
  if (t.accessible) j["accessible"] = *t.accessible;
  json kids = json::array();
  for (const auto& c : t.children) kids.push_back(trace_json(c));
  j["children"] = kids;
  return j;
}

void walk(const TraceNode& t, const std::function<void(const TraceNode&)>& f) {
  f(t);
  for (const auto& c : t.children) walk(c, f);
}

void trace_text(std::ostream& out, const TraceNode& t, int depth) {
  out << std::string(static_cast<std::size_t>(depth) * 2 + 4, ' ') << (t.holds ? "[T] " : "[F] ") << t.formula
      << "  @ " << t.world;
  for (const auto& q : t.quantities) out << "  {" << quantity_text(q) << "}";
  if (!t.note.empty()) out << "  -- " << t.note;
  out << '\n';
  for (const auto& c : t.children) trace_text(out, c, depth + 1);
}

struct Result {
  std::string name;
  std::string world;
  std::string formula;
  Verdict verdict;
};

Result run_check(const Evaluator& ev, const Check& c) {
  EvalOptions opts{true};
  Verdict v = c.world == "all" ? ev.eval_all(c.formula, opts)
                               : ev.eval(ev.model().world(c.world), c.formula, opts);
  return {c.name, c.world, print(c.formula), std::move(v)};
}

json result_json(const Result& r, bool with_trace) {
  json j{{"name", r.name}, {"world", r.world}, {"formula", r.formula}, {"holds", r.verdict.holds}};
  j["failing_world"] = r.verdict.failing_world ? json(*r.verdict.failing_world) : json(nullptr);
  json qs = json::array();
  json know = json::array();
  walk(*r.verdict.trace, [&](const TraceNode& t) {
    for (const auto& q : t.quantities) {
      json e = quantity_json(q);
      e["formula"] = t.formula;
      e["world"] = t.world;
      qs.push_back(e);
    }
    if (t.accessible) {
      know.push_back({{"formula", t.formula},
                      {"world", t.world},
                      {"accessible", *t.accessible},
                      {"relative_to_declared_universe", true}});
    }
  });
  j["quantities"] = qs;
  j["know"] = know;
  if (with_trace) j["trace"] = trace_json(*r.verdict.trace);
  return j;
}

void result_text(std::ostream& out, const Result& r, bool with_trace) {
  out << (r.verdict.holds ? "PASS " : "FAIL ") << r.name << "  [" << r.world << "]  "
      << r.formula << '\n';
  if (r.verdict.failing_world) out << "    first failing world: " << *r.verdict.failing_world << '\n';
  if (with_trace) {
    trace_text(out, *r.verdict.trace, 0);
    return;
  }
  walk(*r.verdict.trace, [&](const TraceNode& t) {
    for (const auto& q : t.quantities) out << "    " << t.world << ": " << quantity_text(q) << "  in " << t.formula << '\n';
    if (t.accessible) {
      out << "    " << t.world << ": " << *t.accessible
          << " accessible world(s), relative to declared universe  in " << t.formula << '\n';
    }
  });
}

int emit(const std::vector<Result>& results, const Options& options, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) all = all && r.verdict.holds;
  if (options.json) {
    json checks = json::array();
    for (const auto& r : results) checks.push_back(result_json(r, options.trace));
    out << json{{"holds", all}, {"checks", checks}}.dump(2) << '\n';
  } else {
    for (const auto& r : results) result_text(out, r, options.trace);
    if (results.size() > 1) out << (all ? "all checks hold" : "some checks fail") << '\n';
  }
  return all ? kHolds : kFails;
}

int report_error(const std::exception& e, const Options& options, std::ostream& out, std::ostream& err) {
  std::string code = "Error";
  json j{{"message", e.what()}};
  if (const auto* me = dynamic_cast<const Error*>(&e)) {
    code = std::string(error_code_name(me->code()));
    if (const auto* se = dynamic_cast<const SyntaxError*>(&e)) {
      j["line"] = se->line();
      j["column"] = se->column();
      j["expected"] = se->expected();
    }
  }
  if (options.json) {
    json full{{"error", json{{"code", code}}}};
    full["error"].update(j);
    out << full.dump(2) << '\n';
  }
  err << "error [" << code << "]: " << e.what() << '\n';
  return kError;
}

io::LoadedModel load(const std::filesystem::path& path, const Options& options) {
  return io::load_model(path, io::LoadOptions{options.seed});
}

// ----------------------------------------------------------- templates

std::string str_param(const json& p, const char* key, const std::string& kind) {
  auto it = p.find(key);
  if (it == p.end() || !it->is_string()) bad("template " + kind, std::string("missing string parameter '") + key + "'");
  return it->get<std::string>();
}

IntervalSet interval_param(const json& p, const std::string& kind) {
  auto it = p.find("interval");
  if (it == p.end()) bad("template " + kind, "missing parameter 'interval'");
  if (it->is_string()) return parse_interval(it->get<std::string>());
  return IntervalSet::point(io::rational_from_json_text(it->dump()));
}

Rational rational_param(const json& p, const char* key, const std::string& kind) {
  auto it = p.find(key);
  if (it == p.end()) bad("template " + kind, std::string("missing parameter '") + key + "'");
  return io::rational_from_json_text(it->dump());
}

templates::GroupRef group_param(const json& p, const char* key, const std::string& kind) {
  std::string g = str_param(p, key, kind);
  if (!g.empty() && g[0] == '!') return templates::GroupRef::complement_of(g.substr(1));
  return templates::GroupRef::of(g);
}

std::vector<std::string> labels_param(const json& p, const DistributionalModel& model) {
  auto it = p.find("labels");
  if (it == p.end()) return {model.label_alphabet.begin(), model.label_alphabet.end()};
  std::vector<std::string> out;
  for (const auto& l : *it) {
    if (!l.is_string()) bad("labels", "expected strings");
    out.push_back(l.get<std::string>());
  }
  return out;
}

}  // namespace

DatasetFormula build_template(const std::string& kind, std::string_view params_json,
                              const DistributionalModel& model) {
  json p = params_json.empty() ? json::object() : json::parse(params_json);
  if (!p.is_object()) bad("template " + kind, "params must be an object");
  auto f = [&]() -> DatasetFormula {
    using namespace templates;
    if (kind == "generalization_error") {
      return generalization_error(str_param(p, "loss", kind), rational_param(p, "bound", kind));
    }
    if (kind == "target_robust") {
      return target_robust(str_param(p, "label", kind), str_param(p, "target", kind),
                           interval_param(p, kind), str_param(p, "relation", kind));
    }
    if (kind == "total_robust") {
      return total_robust(str_param(p, "label", kind), interval_param(p, kind), str_param(p, "relation", kind));
    }
    if (kind == "robust_variant") {
      templates::Confusion of = parse_confusion(str_param(p, "of", kind));
      return robust_variant(of, str_param(p, "label", kind),
                            interval_param(p, kind), str_param(p, "relation", kind));
    }
    if (kind == "group_fairness") {
      return group_fairness(group_param(p, "g0", kind), group_param(p, "g1", kind),
                            rational_param(p, "epsilon", kind));
    }
    if (kind == "equalized_odds") {
      return equalized_odds(group_param(p, "g0", kind), group_param(p, "g1", kind),
                            rational_param(p, "epsilon", kind), labels_param(p, model));
    }
    if (kind == "equal_opportunity") {
      return equal_opportunity(str_param(p, "g0", kind), str_param(p, "label", kind));
    }
    if (kind == "sufficiency") {
      return sufficiency(group_param(p, "g0", kind), group_param(p, "g1", kind),
                         rational_param(p, "epsilon", kind), labels_param(p, model));
    }
    templates::Confusion which = parse_confusion(kind);
    return confusion(which, str_param(p, "label", kind), interval_param(p, kind));
  }();
  // Re-reading the canonical text checks every symbol against the model.
  return parse(print(f), model.declarations());
}

std::vector<Check> parse_spec(std::string_view json_text, const DistributionalModel& model) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("spec: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("checks") || !doc["checks"].is_array()) {
    bad("spec", "expected {\"checks\": [...]}");
  }
  Declarations decls = model.declarations();
  std::vector<Check> out;
  std::set<std::string> names;
  for (const auto& c : doc["checks"]) {
    std::string name = str_param(c, "name", "check");
    std::string where = "checks." + name;
    if (!names.insert(name).second) bad(where, "duplicate check name");
    std::string world = c.contains("world") ? str_param(c, "world", "check") : "all";
    if (world != "all") model.world(world);
    if (c.contains("formula") == c.contains("template")) bad(where, "give exactly one of 'formula' or 'template'");
    if (c.contains("formula")) {
      out.push_back({name, parse(str_param(c, "formula", "check"), decls), world});
    } else {
      const json& t = c["template"];
      std::string kind = str_param(t, "kind", "template");
      std::string params = t.contains("params") ? t["params"].dump() : "";
      out.push_back({name, build_template(kind, params, model), world});
    }
  }
  return out;
}

int cmd_eval(const std::filesystem::path& model_path, const std::string& world, const std::string& formula,
             const Options& options, std::ostream& out, std::ostream& err) {
  try {
    io::LoadedModel lm = load(model_path, options);
    Check c{"eval", parse(formula, lm.model.declarations()), world};
    if (world != "all") lm.model.world(world);
    Evaluator ev(lm.model);
    return emit({run_check(ev, c)}, options, out);
  } catch (const std::exception& e) {
    return report_error(e, options, out, err);
  }
}

int cmd_check(const std::filesystem::path& model_path, const std::filesystem::path& spec_path,
              const Options& options, std::ostream& out, std::ostream& err) {
  try {
    io::LoadedModel lm = load(model_path, options);
    std::vector<Check> checks = parse_spec(read_file(spec_path, "spec"), lm.model);
    if (options.only) {
      std::erase_if(checks, [&](const Check& c) { return c.name != *options.only; });
      if (checks.empty()) throw Error(ErrorCode::ConfigError, "no check named '" + *options.only + "'");
    }
    Evaluator ev(lm.model);
    std::vector<Result> results;
    for (const auto& c : checks) results.push_back(run_check(ev, c));
    return emit(results, options, out);
  } catch (const std::exception& e) {
    return report_error(e, options, out, err);
  }
}

int cmd_report(const std::filesystem::path& model_path, const std::string& world_name, const std::string& label,
               const std::vector<std::string>& groups, const Options& options, std::ostream& out,
               std::ostream& err) {
  try {
    io::LoadedModel lm = load(model_path, options);
    const DistributionalModel& m = lm.model;
    const World& w = m.world(world_name);
    if (!m.label_alphabet.count(label)) throw Error(ErrorCode::UnknownLabel, "unknown label '" + label + "'");
    if (!groups.empty() && groups.size() != 2) {
      throw Error(ErrorCode::ConfigError, "--groups takes exactly two groups, e.g. G0,G1 or G0,!G0");
    }
    Evaluator ev(m);
    using templates::actual;
    using templates::predicted;
    StaticFormula p = predicted(label);
    StaticFormula h = actual(label);
    auto conditional = [&](const StaticFormula& guard, const StaticFormula& body) -> std::optional<Rational> {
      auto sub = ev.restrict(w, guard);
      if (!sub) return std::nullopt;
      return ev.prob_of(*sub, body);
    };
    std::vector<std::pair<std::string, std::optional<Rational>>> confusion{
        {"precision", conditional(p, h)},
        {"recall", conditional(h, p)},
        {"accuracy", ev.prob_of(w, iff(p, h))},
        {"prevalence", ev.prob_of(w, h)},
        {"fdr", conditional(p, !h)},
        {"for", conditional(!p, h)},
        {"npv", conditional(!p, !h)},
        {"fallout", conditional(!h, p)},
        {"specificity", conditional(!h, !p)},
        {"missrate", conditional(h, !p)},
    };

    struct Fair {
      std::string section;
      std::string label;
      std::optional<Rational> tv;
    };
    std::vector<Fair> fairness;
    if (!groups.empty()) {
      auto group = [&](const std::string& g) {
        auto ref = g[0] == '!' ? templates::GroupRef::complement_of(g.substr(1)) : templates::GroupRef::of(g);
        if (!m.groups.count(ref.symbol)) throw Error(ErrorCode::UnknownGroup, "unknown group '" + ref.symbol + "'");
        return ref.formula();
      };
      StaticFormula g0 = group(groups[0]);
      StaticFormula g1 = group(groups[1]);
      StaticFormula psi = StaticFormula::atom("psi", {"x", "yhat"});
      StaticFormula oracle = StaticFormula::atom("h", {"x", "y"});
      auto tv = [&](const StaticFormula& a, const StaticFormula& b, const std::string& var) -> std::optional<Rational> {
        auto w0 = ev.restrict(w, a);
        auto w1 = ev.restrict(w, b);
        if (!w0 || !w1) return std::nullopt;
        return total_variation(marginal(*w0, var), marginal(*w1, var));
      };
      fairness.push_back({"independence", "", tv(g0 & psi, g1 & psi, "yhat")});
      for (const auto& l : m.label_alphabet) {
        StaticFormula gamma = psi & actual(l);
        fairness.push_back({"separation", l, tv(g0 & gamma, g1 & gamma, "yhat")});
      }
      for (const auto& l : m.label_alphabet) {
        StaticFormula gamma = predicted(l) & oracle;
        fairness.push_back({"sufficiency", l, tv(g0 & gamma, g1 & gamma, "y")});
      }
    }

    auto value_json = [](const std::optional<Rational>& r) { return r ? number_json(*r) : json(nullptr); };
    auto value_text = [](const std::optional<Rational>& r) {
      return r ? to_exact_string(*r) + " (" + to_decimal(*r, 12) + ")" : std::string("undefined");
    };
    if (options.json) {
      json j{{"world", world_name}, {"label", label}, {"rows", w.total()}};
      json c = json::object();
      for (const auto& [name, v] : confusion) c[name] = value_json(v);
      j["confusion"] = c;
      if (!groups.empty()) {
        json f{{"groups", groups}};
        json sep = json::object();
        json suf = json::object();
        for (const auto& e : fairness) {
          if (e.section == "independence") f["independence"] = value_json(e.tv);
          if (e.section == "separation") sep[e.label] = value_json(e.tv);
          if (e.section == "sufficiency") suf[e.label] = value_json(e.tv);
        }
        f["separation"] = sep;
        f["sufficiency"] = suf;
        j["fairness"] = f;
      }
      out << j.dump(2) << '\n';
    } else {
      out << "world " << world_name << " (" << w.total() << " rows), label " << label << '\n';
      for (const auto& [name, v] : confusion) out << "  " << name << std::string(13 - name.size(), ' ') << value_text(v) << '\n';
      if (!groups.empty()) {
        out << "fairness " << groups[0] << " vs " << groups[1] << " (total variation)\n";
        for (const auto& e : fairness) {
          std::string key = e.section + (e.label.empty() ? "" : "[" + e.label + "]");
          out << "  " << key << std::string(key.size() < 24 ? 24 - key.size() : 1, ' ') << value_text(e.tv) << '\n';
        }
      }
    }
    return kHolds;
  } catch (const std::exception& e) {
    return report_error(e, options, out, err);
  }
}

}  // namespace mlspec::cli
