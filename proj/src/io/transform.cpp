#include "mlspec/io/transform.hpp"

#include <algorithm>
#include <array>
#include <map>

#include "mlspec/error.hpp"

namespace mlspec::io {

std::uint64_t draw_below(std::mt19937_64& rng, std::uint64_t bound) {
  if (bound == 0) return 0;
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
  std::uint64_t r;
  do {
    r = rng();
  } while (r >= limit);
  return r % bound;
}

namespace {

bool bernoulli(std::mt19937_64& rng, const Rational& p) {
  if (p <= 0) return false;
  if (p >= 1) return true;
  if (!p.get_den().fits_ulong_p()) {
    throw Error(ErrorCode::InvalidTransform, "flip probability denominator is too large");
  }
  return draw_below(rng, p.get_den().get_ui()) < p.get_num().get_ui();
}

World refresh_labels(const World& w, const TransformSpec& spec, const TransformContext& ctx) {
  World out = w;
  if (out.has_variable("yhat")) {
    std::vector<std::pair<State, std::uint64_t>> entries;
    auto states = out.states();
    auto counts = out.counts();
    for (std::size_t i = 0; i < states.size(); ++i) entries.emplace_back(states[i].without("yhat"), counts[i]);
    out = World::from_counts(std::move(entries), w.name());
  }
  bool want = spec.relabel.value_or(ctx.classifier.has_value());
  if (!want) return out;
  if (!ctx.classifier) {
    throw Error(ErrorCode::MissingAdapter,
                "transform needs a classifier adapter to recompute predictions");
  }
  out = label_world(out, *ctx.classifier, "yhat", ctx.labels);
  if (ctx.oracle) out = label_world(out, *ctx.oracle, "y", ctx.labels);
  return out;
}

}  // namespace

World apply_transform(const TransformSpec& spec, const World& w, const TransformContext& ctx) {
  using K = TransformSpec::Kind;
  auto states = w.states();
  auto counts = w.counts();
  std::vector<std::pair<State, std::uint64_t>> entries;

  switch (spec.kind) {
    case K::filter: {
      std::vector<std::string> params = w.variables();
      Expr e = Expr::compile(spec.expression, params, ctx.feature_names);
      for (std::size_t i = 0; i < states.size(); ++i) {
        std::vector<const Value*> args;
        for (const auto& p : params) args.push_back(&states[i].at(p));
        if (e.holds(args)) entries.emplace_back(states[i], counts[i]);
      }
      if (entries.empty()) {
        throw Error(ErrorCode::EmptyWorld, "filter '" + spec.expression + "' removed every row of '" + w.name() + "'");
      }
      return World::from_counts(std::move(entries), w.name());
    }
    case K::subsample: {
      if (spec.count == 0) throw Error(ErrorCode::InvalidTransform, "subsample count must be positive");
      const std::uint64_t n = w.total();
      if (spec.count >= n) return w;
      // Floyd's algorithm: `count` distinct row indices out of n.
      std::mt19937_64 rng(spec.seed);
      std::set<std::uint64_t> chosen;
      for (std::uint64_t j = n - spec.count; j < n; ++j) {
        std::uint64_t t = draw_below(rng, j + 1);
        if (!chosen.insert(t).second) chosen.insert(j);
      }
      std::uint64_t base = 0;
      auto it = chosen.begin();
      for (std::size_t i = 0; i < states.size() && it != chosen.end(); ++i) {
        std::uint64_t end = base + counts[i];
        std::uint64_t k = 0;
        while (it != chosen.end() && *it < end) {
          ++k;
          ++it;
        }
        if (k) entries.emplace_back(states[i], k);
        base = end;
      }
      return World::from_counts(std::move(entries), w.name());
    }
    case K::perturb: {
      const bool categorical = states.front().at("x").is_label();
      if (categorical && spec.noise) {
        throw Error(ErrorCode::IncompatibleFeature, "additive noise needs a numeric x");
      }
      if (!categorical && spec.flip) {
        throw Error(ErrorCode::IncompatibleFeature, "a flip probability needs a categorical x");
      }
      if (!spec.noise && !spec.flip) {
        throw Error(ErrorCode::InvalidTransform, "perturb needs 'noise' or 'flip'");
      }
      if ((spec.noise && *spec.noise < 0) || (spec.flip && (*spec.flip < 0 || *spec.flip > 1))) {
        throw Error(ErrorCode::InvalidTransform, "perturb parameters out of range");
      }
      std::vector<std::string> categories;
      if (categorical) {
        for (const auto& s : states) categories.push_back(s.at("x").symbol());
        std::sort(categories.begin(), categories.end());
        categories.erase(std::unique(categories.begin(), categories.end()), categories.end());
      }
      std::mt19937_64 rng(spec.seed);
      for (std::size_t i = 0; i < states.size(); ++i) {
        const Value& x = states[i].at("x");
        for (std::uint64_t copy = 0; copy < counts[i]; ++copy) {
          Value moved = x;
          if (categorical) {
            if (categories.size() > 1 && bernoulli(rng, *spec.flip)) {
              auto own = std::find(categories.begin(), categories.end(), x.symbol()) - categories.begin();
              auto pick = static_cast<std::ptrdiff_t>(draw_below(rng, categories.size() - 1));
              if (pick >= own) ++pick;
              moved = Value::label(categories[static_cast<std::size_t>(pick)]);
            }
          } else {
            NumVec xs = x.components();
            for (auto& c : xs) {
              auto k = static_cast<long>(draw_below(rng, 2001)) - 1000;
              c += *spec.noise * Rational(k, 1000);
            }
            moved = Value::numbers(std::move(xs));
          }
          entries.emplace_back(states[i].with("x", std::move(moved)), 1);
        }
      }
      return refresh_labels(World::from_counts(std::move(entries), w.name()), spec, ctx);
    }
    case K::map: {
      if (spec.expressions.empty()) throw Error(ErrorCode::InvalidTransform, "map needs expressions");
      std::vector<Expr> exprs;
      for (const auto& text : spec.expressions) exprs.push_back(Expr::compile(text, {"x"}, ctx.feature_names));
      for (std::size_t i = 0; i < states.size(); ++i) {
        const Value* x = &states[i].at("x");
        NumVec xs;
        std::optional<Value> label;
        for (const auto& e : exprs) {
          Expr::Result r = e.evaluate({&x, 1});
          if (auto* q = std::get_if<Rational>(&r)) {
            xs.push_back(*q);
          } else if (auto* v = std::get_if<NumVec>(&r)) {
            xs.insert(xs.end(), v->begin(), v->end());
          } else if (auto* s = std::get_if<std::string>(&r); s && exprs.size() == 1) {
            label = Value::label(*s);
          } else {
            throw Error(ErrorCode::IncompatibleFeature,
                        "map expression '" + e.source() + "' must produce a number");
          }
        }
        entries.emplace_back(states[i].with("x", label ? *label : Value::numbers(std::move(xs))), counts[i]);
      }
      return refresh_labels(World::from_counts(std::move(entries), w.name()), spec, ctx);
    }
  }
  throw Error(ErrorCode::InvalidTransform, "unknown transform kind");
}

TransformFn make_transform(TransformSpec spec, TransformContext context) {
  return [spec = std::move(spec), context = std::move(context)](const World& w) {
    return apply_transform(spec, w, context);
  };
}

}  // namespace mlspec::io
