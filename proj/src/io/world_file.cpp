#include "mlspec/io/world_file.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "mlspec/error.hpp"

namespace mlspec::io {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string trim(std::string s) {
  auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

}  // namespace

bool valid_label(std::string_view label) {
  if (label.empty()) return false;
  for (char c : label) {
    bool ok = std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

WorldFile read_world(std::istream& in, const std::string& name, const std::set<std::string>& labels,
                     const std::string& source) {
  std::size_t line_no = 0;
  auto fail = [&](ErrorCode code, const std::string& msg) -> Error {
    return Error(code, source + ":" + std::to_string(line_no) + ": " + msg);
  };

  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      break;
    }
  }
  if (header.empty()) throw fail(ErrorCode::ParseError, "missing header");

  int mult_col = -1;
  int y_col = -1;
  int yhat_col = -1;
  int x_col = -1;
  std::vector<int> feature_cols;
  std::vector<std::string> features;
  for (std::size_t i = 0; i < header.size(); ++i) {
    std::string h = trim(header[i]);
    int col = static_cast<int>(i);
    auto set_once = [&](int& slot) {
      if (slot >= 0) throw fail(ErrorCode::SchemaMismatch, "duplicate column '" + h + "'");
      slot = col;
    };
    if (h == "#mult") {
      set_once(mult_col);
    } else if (h == "y") {
      set_once(y_col);
    } else if (h == "yhat") {
      set_once(yhat_col);
    } else if (h == "x") {
      set_once(x_col);
    } else if (h.rfind("x.", 0) == 0 && h.size() > 2) {
      std::string f = h.substr(2);
      for (const auto& existing : features) {
        if (existing == f) throw fail(ErrorCode::SchemaMismatch, "duplicate column '" + h + "'");
      }
      features.push_back(f);
      feature_cols.push_back(col);
    } else {
      throw fail(ErrorCode::SchemaMismatch, "unexpected column '" + h + "'");
    }
  }
  if (y_col < 0) throw fail(ErrorCode::SchemaMismatch, "missing column 'y'");
  if (x_col >= 0 && !feature_cols.empty()) {
    throw fail(ErrorCode::SchemaMismatch, "both 'x' and 'x.<name>' columns present");
  }
  if (x_col < 0 && feature_cols.empty()) throw fail(ErrorCode::SchemaMismatch, "missing x columns");

  // A categorical x uses the label syntax but not the label alphabet.
  auto label = [&](const std::string& text, const char* column, bool declared = true) {
    std::string t = trim(text);
    if (!valid_label(t)) throw fail(ErrorCode::ParseError, std::string("invalid label in '") + column + "': '" + t + "'");
    if (declared && !labels.empty() && !labels.count(t)) {
      throw fail(ErrorCode::UnknownLabel, std::string("label '") + t + "' in '" + column + "' is not declared");
    }
    return Value::label(t);
  };

  std::vector<std::pair<State, std::uint64_t>> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    std::vector<std::string> fields = split(line);
    if (fields.size() != header.size()) {
      throw fail(ErrorCode::ParseError, "expected " + std::to_string(header.size()) + " fields, got " +
                                            std::to_string(fields.size()));
    }
    std::uint64_t mult = 1;
    if (mult_col >= 0) {
      std::string m = trim(fields[mult_col]);
      std::size_t used = 0;
      try {
        if (m.empty() || m[0] == '-' || m[0] == '+') throw std::invalid_argument("sign");
        mult = std::stoull(m, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used == 0 || used != m.size() || mult == 0) {
        throw fail(ErrorCode::ParseError, "multiplicity must be a positive integer, got '" + m + "'");
      }
    }
    std::vector<std::pair<std::string, Value>> entry;
    if (x_col >= 0) {
      entry.emplace_back("x", label(fields[x_col], "x", false));
    } else {
      NumVec xs;
      for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        std::string text = trim(fields[feature_cols[k]]);
        auto r = try_parse_rational(text);
        if (!r) throw fail(ErrorCode::ParseError, "feature '" + features[k] + "' is not a number: '" + text + "'");
        xs.push_back(*r);
      }
      entry.emplace_back("x", Value::numbers(std::move(xs)));
    }
    entry.emplace_back("y", label(fields[y_col], "y"));
    if (yhat_col >= 0) entry.emplace_back("yhat", label(fields[yhat_col], "yhat"));
    entries.emplace_back(State(std::move(entry)), mult);
  }
  if (entries.empty()) {
    throw Error(ErrorCode::EmptyWorld, source + ": world '" + name + "' has no rows");
  }
  return WorldFile{World::from_counts(std::move(entries), name), std::move(features)};
}

WorldFile load_world(const std::filesystem::path& path, const std::string& name,
                     const std::set<std::string>& labels) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path.string() + "'");
  return read_world(in, name, labels, path.string());
}

void write_world(std::ostream& out, const World& w, const std::vector<std::string>& features) {
  bool has_yhat = w.has_variable("yhat");
  bool categorical = w.states().front().at("x").is_label();
  out << "#mult";
  if (categorical) {
    out << ",x";
  } else {
    for (const auto& f : features) out << ",x." << f;
  }
  out << ",y";
  if (has_yhat) out << ",yhat";
  out << '\n';
  auto states = w.states();
  auto counts = w.counts();
  for (std::size_t i = 0; i < states.size(); ++i) {
    const State& s = states[i];
    out << counts[i];
    const Value& x = s.at("x");
    if (categorical) {
      out << ',' << x.symbol();
    } else {
      if (x.components().size() != features.size()) {
        throw Error(ErrorCode::SchemaMismatch, "feature names do not match the x dimension");
      }
      for (const auto& c : x.components()) out << ',' << to_literal(c);
    }
    out << ',' << s.at("y").symbol();
    if (has_yhat) out << ',' << s.at("yhat").symbol();
    out << '\n';
  }
}

void save_world(const std::filesystem::path& path, const World& w,
                const std::vector<std::string>& features) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + path.string() + "'");
  write_world(out, w, features);
}

}  // namespace mlspec::io
