#include "mlspec/io/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

#include "json.hpp"
#include "mlspec/error.hpp"
#include "mlspec/io/robustness.hpp"
#include "mlspec/io/world_file.hpp"

namespace mlspec::io {

namespace {

using json = nlohmann::json;

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::ConfigError, where + ": " + what);
}

const json& field(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) bad(where, std::string("missing '") + key + "'");
  return *it;
}

std::string string_of(const json& j, const std::string& where) {
  if (!j.is_string()) bad(where, "expected a string");
  return j.get<std::string>();
}

Rational rational_of(const json& j, const std::string& where) {
  if (j.is_string()) {
    auto r = try_parse_rational(j.get<std::string>());
    if (!r) bad(where, "not a number: '" + j.get<std::string>() + "'");
    return *r;
  }
  if (j.is_number_integer()) {
    return Rational(mpz_class(j.dump()));
  }
  if (j.is_number_float()) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, j.get<double>());
    return parse_rational(std::string_view(buf, static_cast<std::size_t>(res.ptr - buf)));
  }
  bad(where, "expected a number");
}

std::uint64_t unsigned_of(const json& j, const std::string& where) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
    bad(where, "expected a non-negative integer");
  }
  return j.get<std::uint64_t>();
}

std::vector<std::string> strings_of(const json& j, const std::string& where) {
  if (!j.is_array()) bad(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& e : j) out.push_back(string_of(e, where));
  return out;
}

std::optional<AdapterSpec> adapter_of(const json& doc, const char* key, const std::filesystem::path& base) {
  auto it = doc.find(key);
  if (it == doc.end() || it->is_null()) return std::nullopt;
  std::string where = key;
  if (it->is_string()) return AdapterSpec{it->get<std::string>(), base};
  return AdapterSpec{string_of(field(*it, "command", where), where + ".command"), base};
}

TransformSpec transform_of(const json& j, const std::string& where, const LoadOptions& options) {
  if (!j.is_object()) bad(where, "expected an object");
  TransformSpec t;
  std::string kind = string_of(field(j, "kind", where), where + ".kind");
  if (kind == "filter") {
    t.kind = TransformSpec::Kind::filter;
    t.expression = string_of(field(j, "expression", where), where + ".expression");
  } else if (kind == "subsample") {
    t.kind = TransformSpec::Kind::subsample;
    t.count = unsigned_of(field(j, "count", where), where + ".count");
  } else if (kind == "perturb") {
    t.kind = TransformSpec::Kind::perturb;
    if (j.contains("noise")) t.noise = rational_of(j["noise"], where + ".noise");
    if (j.contains("flip")) t.flip = rational_of(j["flip"], where + ".flip");
  } else if (kind == "map") {
    t.kind = TransformSpec::Kind::map;
    t.expressions = strings_of(field(j, "expressions", where), where + ".expressions");
  } else {
    bad(where + ".kind", "unknown transform kind '" + kind + "'");
  }
  if (j.contains("seed")) t.seed = unsigned_of(j["seed"], where + ".seed");
  if (options.seed) t.seed = *options.seed;
  if (j.contains("relabel")) {
    if (!j["relabel"].is_boolean()) bad(where + ".relabel", "expected true or false");
    t.relabel = j["relabel"].get<bool>();
  }
  return t;
}

LossFn table_loss(const json& j, const std::string& where) {
  std::map<std::pair<std::string, std::string>, Rational> costs;
  for (const auto& row : field(j, "costs", where)) {
    if (!row.is_array() || row.size() != 3) bad(where + ".costs", "expected [y, yhat, cost] triples");
    costs[{string_of(row[0], where), string_of(row[1], where)}] = rational_of(row[2], where);
  }
  Rational fallback = j.contains("default") ? rational_of(j["default"], where + ".default") : Rational(0);
  return [costs, fallback](const Value& y, const Value& yhat) {
    auto it = costs.find({y.to_string(), yhat.to_string()});
    return it == costs.end() ? fallback : it->second;
  };
}

bool reserved_symbol(const std::string& s) {
  return s == "psi" || s == "h" || s.rfind("psi_", 0) == 0 || s.rfind("h_", 0) == 0 ||
         s.rfind("eta_", 0) == 0 || s == "P" || s == "K" || s == "Dia" || s == "ExpLoss" ||
         s == "true" || s == "false" || s == "u";
}

}  // namespace

Rational rational_from_json_text(std::string_view json_scalar) {
  json j;
  try {
    j = json::parse(json_scalar);
  } catch (const json::exception& e) {
    bad("value", e.what());
  }
  return rational_of(j, "value");
}

LoadedModel parse_model(std::string_view json_text, const std::filesystem::path& base_dir,
                        const LoadOptions& options) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ConfigError, std::string("model config: ") + e.what());
  }
  if (!doc.is_object()) bad("model config", "expected an object");

  LoadedModel out;
  DistributionalModel& m = out.model;

  if (doc.contains("labels")) {
    for (const auto& l : strings_of(doc["labels"], "labels")) {
      if (!valid_label(l)) bad("labels", "invalid label '" + l + "'");
      m.label_alphabet.insert(l);
    }
  }
  out.classifier = adapter_of(doc, "classifier", base_dir);
  out.oracle = adapter_of(doc, "oracle", base_dir);

  if (doc.contains("transforms")) {
    if (!doc["transforms"].is_object()) bad("transforms", "expected an object");
    for (const auto& [name, spec] : doc["transforms"].items()) {
      out.transforms.emplace(name, transform_of(spec, "transforms." + name, options));
    }
  }

  // Worlds: files first, then derived worlds in dependency order.
  if (!doc.contains("worlds") || !doc["worlds"].is_object() || doc["worlds"].empty()) {
    bad("worlds", "at least one world is required");
  }
  const json& worlds = doc["worlds"];
  std::optional<std::vector<std::string>> features;
  std::map<std::string, World> built;
  for (const auto& [name, spec] : worlds.items()) {
    std::string where = "worlds." + name;
    const json* file = nullptr;
    if (spec.is_string()) {
      file = &spec;
    } else if (spec.is_object() && spec.contains("file")) {
      file = &spec["file"];
    }
    if (!file) continue;
    WorldFile wf = load_world(base_dir / string_of(*file, where + ".file"), name, m.label_alphabet);
    if (features && *features != wf.features) {
      bad(where, "feature columns differ from the other worlds");
    }
    features = wf.features;
    World w = std::move(wf.world);
    if (!w.has_variable("yhat") && out.classifier) {
      w = label_world(w, *out.classifier, "yhat", m.label_alphabet);
    }
    built.emplace(name, std::move(w));
  }
  if (!features) bad("worlds", "at least one world must come from a file");
  m.feature_names = *features;

  TransformContext ctx{out.classifier, out.oracle, m.label_alphabet, m.feature_names};
  if (ctx.labels.empty()) {
    // Without a declared alphabet, adapters may answer any well-formed label.
    for (const auto& [name, w] : built) {
      for (const auto& s : w.states()) {
        for (const char* v : {"y", "yhat"}) {
          if (const Value* l = s.find(v)) m.label_alphabet.insert(l->symbol());
        }
      }
    }
  }

  std::set<std::string> visiting;
  std::function<const World&(const std::string&)> resolve = [&](const std::string& name) -> const World& {
    if (auto it = built.find(name); it != built.end()) return it->second;
    std::string where = "worlds." + name;
    if (!worlds.contains(name)) bad(where, "unknown world '" + name + "'");
    const json& spec = worlds[name];
    if (!spec.is_object() || !spec.contains("from") || !spec.contains("transform")) {
      bad(where, "expected {\"file\": ...} or {\"from\": ..., \"transform\": ...}");
    }
    if (!visiting.insert(name).second) bad(where, "derivation cycle");
    std::string from = string_of(spec["from"], where + ".from");
    std::string tname = string_of(spec["transform"], where + ".transform");
    auto t = out.transforms.find(tname);
    if (t == out.transforms.end()) bad(where + ".transform", "unknown transform '" + tname + "'");
    const World& source = resolve(from);
    World w = apply_transform(t->second, source, ctx).renamed(name);
    visiting.erase(name);
    return built.emplace(name, std::move(w)).first->second;
  };
  for (const auto& [name, spec] : worlds.items()) resolve(name);
  for (auto& [name, w] : built) m.add_world(std::move(w));

  for (const auto& [name, spec] : out.transforms) {
    m.transforms.emplace(name, make_transform(spec, ctx));
  }

  if (doc.contains("predicates")) {
    for (const auto& [name, spec] : doc["predicates"].items()) {
      std::string where = "predicates." + name;
      if (reserved_symbol(name)) bad(where, "'" + name + "' is reserved");
      std::vector<std::string> params = strings_of(field(spec, "params", where), where + ".params");
      std::string body = string_of(field(spec, "body", where), where + ".body");
      m.predicates.emplace(name, PredicateDef{name, Expr::compile(body, params, m.feature_names)});
    }
  }
  if (doc.contains("groups")) {
    for (const auto& [name, spec] : doc["groups"].items()) {
      std::string where = "groups." + name;
      std::string body = spec.is_object() ? string_of(field(spec, "body", where), where + ".body")
                                          : string_of(spec, where);
      m.groups.emplace(name, GroupDef{name, Expr::compile(body, {"x"}, m.feature_names)});
    }
  }
  if (doc.contains("metric")) {
    m.metric = MetricSpec::parse(string_of(doc["metric"], "metric"));
  }
  if (doc.contains("losses")) {
    for (const auto& [name, spec] : doc["losses"].items()) {
      std::string where = "losses." + name;
      std::string kind = spec.is_string() ? spec.get<std::string>()
                                          : string_of(field(spec, "kind", where), where + ".kind");
      if (kind == "zero_one") {
        m.losses[name] = zero_one_loss;
      } else if (kind == "label_distance") {
        m.losses[name] = label_distance_loss;
      } else if (kind == "table") {
        m.losses[name] = table_loss(spec, where);
      } else {
        bad(where, "unknown loss kind '" + kind + "'");
      }
    }
  }
  if (doc.contains("relations")) {
    for (const auto& [name, spec] : doc["relations"].items()) {
      std::string where = "relations." + name;
      Relation rel;
      if (spec.contains("pairs")) {
        for (const auto& p : spec["pairs"]) {
          if (!p.is_array() || p.size() != 2) bad(where + ".pairs", "expected [from, to] pairs");
          rel.emplace(string_of(p[0], where), string_of(p[1], where));
        }
      } else if (spec.contains("robustness")) {
        const json& r = spec["robustness"];
        std::string rw = where + ".robustness";
        Rational eps = rational_of(field(r, "epsilon", rw), rw + ".epsilon");
        MetricSpec metric;
        if (r.contains("metric")) {
          metric = MetricSpec::parse(string_of(r["metric"], rw + ".metric"));
        } else if (m.metric) {
          metric = *m.metric;
        } else {
          bad(rw, "no metric given and no model metric declared");
        }
        std::vector<const World*> among;
        if (r.contains("among")) {
          for (const auto& n : strings_of(r["among"], rw + ".among")) among.push_back(&m.world(n));
        } else {
          for (const auto& [n, w] : m.worlds) among.push_back(&w);
        }
        rel = build_robustness_relation(among, eps, metric);
      } else {
        bad(where, "expected 'pairs' or 'robustness'");
      }
      m.relations.emplace(name, std::move(rel));
    }
  }
  m.validate();
  return out;
}

LoadedModel load_model(const std::filesystem::path& path, const LoadOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open model config '" + path.string() + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str(), path.parent_path(), options);
}

}  // namespace mlspec::io
