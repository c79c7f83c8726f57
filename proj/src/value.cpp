#include "mlspec/value.hpp"

#include <algorithm>

#include "mlspec/error.hpp"

namespace mlspec {

Value Value::numbers(NumVec components) {
  Value v;
  v.data_ = std::move(components);
  return v;
}

Value Value::number(Rational component) { return numbers(NumVec{std::move(component)}); }

Value Value::label(std::string symbol) {
  Value v;
  v.data_ = Symbol{std::move(symbol)};
  return v;
}

const NumVec& Value::components() const {
  if (!is_numeric()) {
    throw Error(ErrorCode::IncompatibleValues, "expected numeric value, got label " + symbol());
  }
  return std::get<NumVec>(data_);
}

const std::string& Value::symbol() const {
  if (!is_label()) {
    throw Error(ErrorCode::IncompatibleValues, "expected label, got numeric value");
  }
  return std::get<Symbol>(data_).text;
}

std::string Value::to_string() const {
  if (is_label()) return symbol();
  const NumVec& c = components();
  if (c.size() == 1) return to_literal(c.front());
  std::string out = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ", ";
    out += to_literal(c[i]);
  }
  return out + ")";
}

std::string to_string(const Outcome& outcome) {
  if (outcome.size() == 1) return outcome.front().to_string();
  std::string out = "<";
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (i) out += ", ";
    out += outcome[i].to_string();
  }
  return out + ">";
}

State::State(std::initializer_list<std::pair<std::string, Value>> entries)
    : State(std::vector<std::pair<std::string, Value>>(entries)) {}

State::State(std::vector<std::pair<std::string, Value>> entries) : entries_(std::move(entries)) {
  std::sort(entries_.begin(), entries_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  auto dup = std::adjacent_find(entries_.begin(), entries_.end(),
                                [](const auto& a, const auto& b) { return a.first == b.first; });
  if (dup != entries_.end()) {
    throw Error(ErrorCode::SchemaMismatch, "variable assigned twice: " + dup->first);
  }
}

const Value* State::find(std::string_view variable) const {
  auto it = std::lower_bound(entries_.begin(), entries_.end(), variable,
                             [](const auto& e, std::string_view v) { return e.first < v; });
  if (it == entries_.end() || it->first != variable) return nullptr;
  return &it->second;
}

const Value& State::at(std::string_view variable) const {
  if (const Value* v = find(variable)) return *v;
  throw Error(ErrorCode::UnknownVariable, "state has no variable '" + std::string(variable) + "'");
}

std::vector<std::string> State::variables() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& e : entries_) out.push_back(e.first);
  return out;
}

State State::with(const std::string& variable, Value value) const {
  auto entries = entries_;
  auto it = std::lower_bound(entries.begin(), entries.end(), variable,
                             [](const auto& e, const std::string& v) { return e.first < v; });
  if (it != entries.end() && it->first == variable) {
    it->second = std::move(value);
  } else {
    entries.insert(it, {variable, std::move(value)});
  }
  State s;
  s.entries_ = std::move(entries);
  return s;
}

State State::without(std::string_view variable) const {
  State s;
  for (const auto& e : entries_) {
    if (e.first != variable) s.entries_.push_back(e);
  }
  return s;
}

}  // namespace mlspec
