#include "mlspec/world.hpp"

#include <algorithm>
#include <stdexcept>

#include "mlspec/error.hpp"

namespace mlspec {

std::int32_t LabelColumn::code_of(std::string_view symbol) const {
  auto it = std::find(dictionary.begin(), dictionary.end(), symbol);
  if (it == dictionary.end()) return -1;
  return static_cast<std::int32_t>(it - dictionary.begin());
}

namespace {

void check_schema(const std::vector<std::string>& expected, const State& s) {
  if (s.variables() != expected) {
    std::string got;
    for (const auto& v : s.variables()) got += (got.empty() ? "" : ",") + v;
    std::string want;
    for (const auto& v : expected) want += (want.empty() ? "" : ",") + v;
    throw Error(ErrorCode::SchemaMismatch,
                "row variables {" + got + "} differ from world variables {" + want + "}");
  }
}

}  // namespace

World World::from_rows(std::span<const State> rows, std::string name) {
  std::vector<std::pair<State, std::uint64_t>> entries;
  entries.reserve(rows.size());
  for (const auto& r : rows) entries.emplace_back(r, 1);
  return from_counts(std::move(entries), std::move(name));
}

World World::from_counts(std::vector<std::pair<State, std::uint64_t>> entries, std::string name) {
  std::erase_if(entries, [](const auto& e) { return e.second == 0; });
  if (entries.empty()) {
    throw Error(ErrorCode::EmptyWorld, "world '" + name + "' has no rows");
  }
  World w;
  w.name_ = std::move(name);
  w.variables_ = entries.front().first.variables();
  for (const auto& e : entries) check_schema(w.variables_, e.first);

  std::sort(entries.begin(), entries.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  for (auto& e : entries) {
    if (!w.states_.empty() && w.states_.back() == e.first) {
      w.counts_.back() += e.second;
    } else {
      w.states_.push_back(std::move(e.first));
      w.counts_.push_back(e.second);
    }
    w.total_ += e.second;
  }
  w.build_columns();
  return w;
}

void World::build_columns() {
  label_columns_.clear();
  for (const auto& var : variables_) {
    bool all_labels = std::all_of(states_.begin(), states_.end(),
                                  [&](const State& s) { return s.at(var).is_label(); });
    if (!all_labels) continue;
    LabelColumn col;
    col.codes.reserve(states_.size());
    std::map<std::string, std::int32_t, std::less<>> index;
    for (const auto& s : states_) {
      const std::string& sym = s.at(var).symbol();
      auto [it, inserted] = index.try_emplace(sym, static_cast<std::int32_t>(col.dictionary.size()));
      if (inserted) col.dictionary.push_back(sym);
      col.codes.push_back(it->second);
    }
    label_columns_.emplace(var, std::move(col));
  }
}

World World::renamed(std::string name) const {
  World w = *this;
  w.name_ = std::move(name);
  return w;
}

bool World::has_variable(std::string_view variable) const {
  return std::find(variables_.begin(), variables_.end(), variable) != variables_.end();
}

std::uint64_t World::count(const State& s) const {
  auto it = std::lower_bound(states_.begin(), states_.end(), s);
  if (it == states_.end() || !(*it == s)) return 0;
  return counts_[static_cast<std::size_t>(it - states_.begin())];
}

Rational World::prob(const State& s) const {
  Rational r(mpz_class(count(s)), mpz_class(total_));
  r.canonicalize();
  return r;
}

std::optional<World> World::select(const kernels::Mask& mask, std::string name) const {
  if (mask.size() != states_.size()) {
    throw std::invalid_argument("selection mask length differs from world size");
  }
  World w;
  w.name_ = std::move(name);
  w.variables_ = variables_;
  for (std::size_t i = 0; i < states_.size(); ++i) {
    if (!mask[i]) continue;
    w.states_.push_back(states_[i]);
    w.counts_.push_back(counts_[i]);
    w.total_ += counts_[i];
  }
  if (w.states_.empty()) return std::nullopt;
  w.build_columns();
  return w;
}

const LabelColumn* World::label_column(std::string_view variable) const {
  auto it = label_columns_.find(variable);
  return it == label_columns_.end() ? nullptr : &it->second;
}

Distribution::Distribution(std::map<Outcome, Rational> masses) : masses_(std::move(masses)) {
  Rational sum = 0;
  for (const auto& [outcome, mass] : masses_) {
    if (mass <= 0) throw std::invalid_argument("distribution mass must be positive");
    sum += mass;
  }
  if (sum != 1) throw std::invalid_argument("distribution masses sum to " + to_exact_string(sum));
}

Distribution Distribution::point(Outcome outcome) {
  return Distribution(std::map<Outcome, Rational>{{std::move(outcome), Rational(1)}});
}

Distribution Distribution::over_values(const std::map<Value, Rational>& masses) {
  std::map<Outcome, Rational> m;
  for (const auto& [v, p] : masses) m.emplace(Outcome{v}, p);
  return Distribution(std::move(m));
}

Rational Distribution::operator[](const Outcome& outcome) const {
  auto it = masses_.find(outcome);
  return it == masses_.end() ? Rational(0) : it->second;
}

Rational Distribution::mass(const Value& value) const { return (*this)[Outcome{value}]; }

std::vector<Outcome> Distribution::support() const {
  std::vector<Outcome> out;
  out.reserve(masses_.size());
  for (const auto& [o, m] : masses_) out.push_back(o);
  return out;
}

MarginalCounts marginal_counts(const World& w, std::span<const std::string> variables) {
  if (variables.empty()) throw std::invalid_argument("marginal over no variables");
  for (const auto& v : variables) {
    if (!w.has_variable(v)) {
      throw Error(ErrorCode::UnknownVariable,
                  "world '" + w.name() + "' has no variable '" + v + "'");
    }
  }
  MarginalCounts out;
  out.total = w.total();
  auto states = w.states();
  auto counts = w.counts();
  for (std::size_t i = 0; i < states.size(); ++i) {
    Outcome o;
    o.reserve(variables.size());
    for (const auto& v : variables) o.push_back(states[i].at(v));
    out.counts[std::move(o)] += counts[i];
  }
  return out;
}

Distribution to_distribution(const MarginalCounts& counts) {
  std::map<Outcome, Rational> masses;
  for (const auto& [o, c] : counts.counts) {
    Rational r(mpz_class(c), mpz_class(counts.total));
    r.canonicalize();
    masses.emplace(o, r);
  }
  return Distribution(std::move(masses));
}

Distribution marginal(const World& w, std::span<const std::string> variables) {
  return to_distribution(marginal_counts(w, variables));
}

Distribution marginal(const World& w, const std::string& variable) {
  return marginal(w, std::span<const std::string>(&variable, 1));
}

}  // namespace mlspec
