#include "mlspec/parser.hpp"

#include <cctype>
#include <optional>
#include <variant>
#include <vector>

#include "mlspec/error.hpp"

namespace mlspec {

AtomKind resolve_atom(std::string_view symbol, const Declarations& decls) {
  using K = AtomKind::Kind;
  if (symbol == "psi") return {K::classifier, "psi", 2};
  if (symbol == "h") return {K::oracle, "h", 2};
  if (auto it = decls.predicates.find(std::string(symbol)); it != decls.predicates.end()) {
    return {K::user, it->first, it->second};
  }
  auto suffix = [&](std::string_view prefix) -> std::optional<std::string> {
    if (symbol.size() > prefix.size() && symbol.substr(0, prefix.size()) == prefix) {
      return std::string(symbol.substr(prefix.size()));
    }
    return std::nullopt;
  };
  if (auto l = suffix("psi_")) {
    if (decls.labels.count(*l)) return {K::predicted_label, *l, 1};
    throw Error(ErrorCode::UnknownLabel, "unknown label '" + *l + "' in '" + std::string(symbol) + "'");
  }
  if (auto l = suffix("h_")) {
    if (decls.labels.count(*l)) return {K::true_label, *l, 1};
    throw Error(ErrorCode::UnknownLabel, "unknown label '" + *l + "' in '" + std::string(symbol) + "'");
  }
  if (auto g = suffix("eta_")) {
    if (decls.groups.count(*g)) return {K::group, *g, 1};
    throw Error(ErrorCode::UnknownGroup, "unknown group '" + *g + "' in '" + std::string(symbol) + "'");
  }
  throw Error(ErrorCode::UnknownSymbol, "unknown predicate '" + std::string(symbol) + "'");
}

namespace {

// ------------------------------------------------------------------ lexer

enum class Tok {
  ident, number, lparen, rparen, lbrack, rbrack, lbrace, rbrace, comma, semicolon, colon,
  bang, amp, bar, eq, le, lt, gt, arrow, iff, cond, tilde_lbrack, tilde, unite, end
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

std::string describe(const Token& t) {
  if (t.kind == Tok::end) return "end of input";
  return "'" + t.text + "'";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.';
}

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  std::size_t line = 1;
  std::size_t line_start = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '\n') {
      ++i;
      ++line;
      line_start = i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    const std::size_t col = i - line_start + 1;
    const std::size_t start = i;
    auto push = [&](Tok k, std::size_t len) {
      out.push_back({k, std::string(text.substr(start, len)), line, col});
      i += len;
    };
    if (ident_start(c)) {
      std::size_t j = i;
      while (j < text.size()) {
        if (ident_char(text[j])) {
          ++j;
        } else if (text[j] == '-' && j + 1 < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[j + 1])) || text[j + 1] == '_')) {
          ++j;
        } else {
          break;
        }
      }
      push(Tok::ident, j - i);
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      if (j + 1 < text.size() && text[j] == '.' && std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      } else if (j + 1 < text.size() && text[j] == '/' &&
                 std::isdigit(static_cast<unsigned char>(text[j + 1]))) {
        ++j;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
      }
      push(Tok::number, j - i);
      continue;
    }
    std::string_view rest = text.substr(i);
    if (rest.starts_with("<->")) { push(Tok::iff, 3); continue; }
    if (rest.starts_with("<=")) { push(Tok::le, 2); continue; }
    if (rest.starts_with("->")) { push(Tok::arrow, 2); continue; }
    if (rest.starts_with("~>")) { push(Tok::cond, 2); continue; }
    if (rest.starts_with("~[")) { push(Tok::tilde_lbrack, 2); continue; }
    if (rest.starts_with("\xE2\x88\xAA")) { push(Tok::unite, 3); continue; }  // U+222A
    switch (c) {
      case '(': push(Tok::lparen, 1); continue;
      case ')': push(Tok::rparen, 1); continue;
      case '[': push(Tok::lbrack, 1); continue;
      case ']': push(Tok::rbrack, 1); continue;
      case '{': push(Tok::lbrace, 1); continue;
      case '}': push(Tok::rbrace, 1); continue;
      case ',': push(Tok::comma, 1); continue;
      case ';': push(Tok::semicolon, 1); continue;
      case ':': push(Tok::colon, 1); continue;
      case '!': push(Tok::bang, 1); continue;
      case '&': push(Tok::amp, 1); continue;
      case '|': push(Tok::bar, 1); continue;
      case '=': push(Tok::eq, 1); continue;
      case '<': push(Tok::lt, 1); continue;
      case '>': push(Tok::gt, 1); continue;
      case '~': push(Tok::tilde, 1); continue;
      default: break;
    }
    throw SyntaxError(ErrorCode::SyntaxError,
                      "unexpected character '" + std::string(1, c) + "' at line " +
                          std::to_string(line) + ", column " + std::to_string(col),
                      line, col);
  }
  std::size_t col = text.size() - line_start + 1;
  out.push_back({Tok::end, "", line, col});
  return out;
}

// ----------------------------------------------------------------- parser

bool is_keyword(std::string_view s) {
  return s == "P" || s == "K" || s == "Dia" || s == "ExpLoss" || s == "true" || s == "false";
}

struct Term {
  std::variant<StaticFormula, DatasetFormula> f;
  std::size_t line;
  std::size_t column;

  bool is_static() const { return f.index() == 0; }
};

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Declarations& decls)
      : tokens_(lex(text)), decls_(decls) {}

  DatasetFormula dataset() {
    Term t = expr();
    expect_end();
    return need_dataset(t);
  }

  StaticFormula statik() {
    Term t = expr();
    expect_end();
    return need_static(t);
  }

  IntervalSet intervals_only() {
    IntervalSet set = interval_set();
    expect_end();
    return set;
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t k = pos_ + ahead;
    return tokens_[k < tokens_.size() ? k : tokens_.size() - 1];
  }
  bool at(Tok k) const { return peek().kind == k; }
  bool at_ident(std::string_view s) const { return at(Tok::ident) && peek().text == s; }
  const Token& advance() { return tokens_[pos_++]; }

  [[noreturn]] void fail(ErrorCode code, const std::string& msg, const Token& where,
                         std::vector<std::string> expected = {}) const {
    std::string full = msg + " at line " + std::to_string(where.line) + ", column " +
                       std::to_string(where.column);
    if (!expected.empty()) {
      full += " (expected ";
      for (std::size_t k = 0; k < expected.size(); ++k) {
        if (k) full += k + 1 == expected.size() ? " or " : ", ";
        full += expected[k];
      }
      full += ")";
    }
    throw SyntaxError(code, full, where.line, where.column, std::move(expected));
  }

  [[noreturn]] void unexpected(std::vector<std::string> expected) const {
    fail(ErrorCode::SyntaxError, "unexpected " + describe(peek()), peek(), std::move(expected));
  }

  const Token& expect(Tok k, const char* what) {
    if (!at(k)) unexpected({what});
    return advance();
  }

  void expect_end() {
    if (!at(Tok::end)) unexpected({"end of input"});
  }

  StaticFormula need_static(const Term& t) const {
    if (t.is_static()) return std::get<StaticFormula>(t.f);
    Token where{Tok::end, "", t.line, t.column};
    fail(ErrorCode::SyntaxError, "dataset formula used where a static formula is expected", where);
  }

  DatasetFormula need_dataset(const Term& t) const {
    if (!t.is_static()) return std::get<DatasetFormula>(t.f);
    Token where{Tok::end, "", t.line, t.column};
    fail(ErrorCode::SyntaxError,
         "static formula used where a dataset formula is expected (wrap it in P[...])", where);
  }

  // Combines two operands of a connective that exists at both levels.
  template <typename StaticOp, typename DatasetOp>
  Term combine(const Term& a, const Term& b, StaticOp sop, DatasetOp dop) const {
    if (a.is_static() && b.is_static()) {
      return {sop(std::get<StaticFormula>(a.f), std::get<StaticFormula>(b.f)), a.line, a.column};
    }
    return {dop(need_dataset(a), need_dataset(b)), a.line, a.column};
  }

  // expr := or_expr [('~>' | '->' | '<->') expr] | or_expr '~[' ... ']~' or_expr
  Term expr() {
    Term lhs = or_expr();
    if (at(Tok::cond)) {
      advance();
      Term rhs = expr();
      return {DatasetFormula::cond(need_static(lhs), need_dataset(rhs)), lhs.line, lhs.column};
    }
    if (at(Tok::arrow)) {
      advance();
      Term rhs = expr();
      return combine(lhs, rhs, [](auto a, auto b) { return implies(a, b); },
                     [](auto a, auto b) { return implies(a, b); });
    }
    if (at(Tok::iff)) {
      advance();
      Term rhs = expr();
      return combine(lhs, rhs, [](auto a, auto b) { return iff(a, b); },
                     [](auto a, auto b) { return iff(a, b); });
    }
    if (at(Tok::tilde_lbrack)) {
      advance();
      const Token& var = expect(Tok::ident, "variable");
      if (!decls_.variables.count(var.text)) {
        fail(ErrorCode::UnknownSymbol, "unknown variable '" + var.text + "'", var);
      }
      expect(Tok::semicolon, "';'");
      Rational eps = number("epsilon");
      expect(Tok::semicolon, "';'");
      DivergenceSpec div = divergence();
      expect(Tok::rbrack, "']'");
      expect(Tok::tilde, "'~'");
      Term rhs = or_expr();
      return {DatasetFormula::indist(need_static(lhs), need_static(rhs), var.text, eps, div),
              lhs.line, lhs.column};
    }
    return lhs;
  }

  Term or_expr() {
    Term lhs = and_expr();
    while (at(Tok::bar)) {
      advance();
      Term rhs = and_expr();
      lhs = combine(lhs, rhs, [](auto a, auto b) { return a | b; }, [](auto a, auto b) { return a | b; });
    }
    return lhs;
  }

  Term and_expr() {
    Term lhs = unary();
    while (at(Tok::amp)) {
      advance();
      Term rhs = unary();
      lhs = combine(lhs, rhs, [](auto a, auto b) { return a & b; }, [](auto a, auto b) { return a & b; });
    }
    return lhs;
  }

  std::string braced_name(const char* what) {
    expect(Tok::lbrace, "'{'");
    const Token& name = expect(Tok::ident, what);
    expect(Tok::rbrace, "'}'");
    return name.text;
  }

  Term unary() {
    const Token start = peek();
    if (at(Tok::bang)) {
      advance();
      Term t = unary();
      if (t.is_static()) return {!std::get<StaticFormula>(t.f), start.line, start.column};
      return {!std::get<DatasetFormula>(t.f), start.line, start.column};
    }
    if (at_ident("K") && peek(1).kind == Tok::lbrace) {
      advance();
      std::string rel = braced_name("relation");
      check_declared(decls_.relations, rel, ErrorCode::UnknownRelation, "relation", start);
      return {DatasetFormula::know(rel, need_dataset(unary())), start.line, start.column};
    }
    if (at_ident("Dia") && peek(1).kind == Tok::lbrace) {
      advance();
      std::string rel = braced_name("relation");
      check_declared(decls_.relations, rel, ErrorCode::UnknownRelation, "relation", start);
      return {possibly(rel, need_dataset(unary())), start.line, start.column};
    }
    if (at(Tok::lt) && peek(1).kind == Tok::ident && peek(1).text == "T" &&
        peek(2).kind == Tok::colon) {
      advance();
      advance();
      advance();
      const Token& name = expect(Tok::ident, "transform name");
      check_declared(decls_.transforms, name.text, ErrorCode::UnknownTransform, "transform", name);
      expect(Tok::gt, "'>'");
      return {DatasetFormula::transform(name.text, need_dataset(unary())), start.line,
              start.column};
    }
    if (at_ident("P") && (peek(1).kind == Tok::lbrack || peek(1).kind == Tok::lparen ||
                          peek(1).kind == Tok::eq)) {
      advance();
      IntervalSet set = interval_set();
      Term body = unary();
      return {DatasetFormula::prob(std::move(set), need_static(body)), start.line, start.column};
    }
    if (at_ident("ExpLoss") && peek(1).kind == Tok::lbrace) {
      advance();
      std::string loss = braced_name("loss name");
      check_declared(decls_.losses, loss, ErrorCode::UnknownLoss, "loss", start);
      expect(Tok::le, "'<='");
      Rational bound = number("loss bound");
      return {DatasetFormula::exp_loss(loss, bound), start.line, start.column};
    }
    return primary();
  }

  Term primary() {
    const Token start = peek();
    if (at(Tok::lparen)) {
      advance();
      Term inner = expr();
      expect(Tok::rparen, "')'");
      inner.line = start.line;
      inner.column = start.column;
      return inner;
    }
    if (at_ident("true")) {
      advance();
      return {StaticFormula::truth(), start.line, start.column};
    }
    if (at_ident("false")) {
      advance();
      return {StaticFormula::falsum(), start.line, start.column};
    }
    if (at(Tok::ident) && !is_keyword(peek().text)) {
      advance();
      std::vector<std::string> args;
      if (at(Tok::lparen)) {
        advance();
        if (!at(Tok::rparen)) {
          args.push_back(variable());
          while (at(Tok::comma)) {
            advance();
            args.push_back(variable());
          }
        }
        expect(Tok::rparen, "')'");
      }
      AtomKind kind;
      try {
        kind = resolve_atom(start.text, decls_);
      } catch (const Error& e) {
        fail(e.code() == ErrorCode::UnknownPredicate ? ErrorCode::UnknownSymbol : e.code(), e.what(),
             start);
      }
      if (args.size() != kind.arity) {
        fail(ErrorCode::ArityMismatch,
             "'" + start.text + "' takes " + std::to_string(kind.arity) + " argument(s), got " +
                 std::to_string(args.size()),
             start);
      }
      return {StaticFormula::atom(start.text, std::move(args)), start.line, start.column};
    }
    unexpected({"'('", "'!'", "K{", "Dia{", "<T:", "P", "ExpLoss", "true", "false", "predicate"});
  }

  std::string variable() {
    const Token& v = expect(Tok::ident, "variable");
    if (!decls_.variables.count(v.text)) {
      fail(ErrorCode::UnknownSymbol, "unknown variable '" + v.text + "'", v);
    }
    return v.text;
  }

  void check_declared(const std::set<std::string>& set, const std::string& name, ErrorCode code,
                      const char* what, const Token& where) const {
    if (!set.count(name)) fail(code, std::string("unknown ") + what + " '" + name + "'", where);
  }

  Rational number(const char* what) {
    const Token& t = expect(Tok::number, what);
    return parse_rational(t.text);
  }

  DivergenceSpec divergence() {
    const Token& t = expect(Tok::ident, "divergence (tv or winf)");
    if (t.text == "tv") return DivergenceSpec::tv();
    if (t.text != "winf") {
      fail(ErrorCode::UnknownSymbol, "unknown divergence '" + t.text + "'", t, {"tv", "winf"});
    }
    if (!at(Tok::lparen)) return DivergenceSpec::winf();
    advance();
    const Token& m = expect(Tok::ident, "metric");
    MetricSpec metric;
    try {
      metric = MetricSpec::parse(m.text);
    } catch (const Error& e) {
      fail(ErrorCode::UnknownSymbol, e.what(), m, {"discrete", "linf", "l<p>"});
    }
    expect(Tok::rparen, "')'");
    return DivergenceSpec::winf(metric);
  }

  // ---------------------------------------------------------- intervals

  bool at_interval_start() const {
    if (at(Tok::lbrack) || at(Tok::eq)) return true;
    return at(Tok::lparen) && peek(1).kind == Tok::number;
  }

  IntervalSet interval_set() {
    const Token start = peek();
    std::vector<Interval> parts{interval()};
    while ((at(Tok::unite) || at_ident("u"))) {
      // Only a union when an interval follows; "u(x)" stays an atom.
      const Token& after = peek(1);
      bool opens = after.kind == Tok::lbrack || after.kind == Tok::eq ||
                   (after.kind == Tok::lparen && peek(2).kind == Tok::number);
      if (!opens) break;
      advance();
      parts.push_back(interval());
    }
    try {
      return IntervalSet(std::move(parts));
    } catch (const Error& e) {
      fail(e.code(), e.what(), start);
    }
  }

  Interval interval() {
    const Token start = peek();
    if (at(Tok::eq)) {
      advance();
      return Interval::point(number("probability"));
    }
    bool lo_closed;
    if (at(Tok::lbrack)) {
      lo_closed = true;
    } else if (at(Tok::lparen)) {
      lo_closed = false;
    } else {
      fail(ErrorCode::MalformedInterval, "expected an interval", start, {"'['", "'('", "'='"});
    }
    advance();
    if (!at(Tok::number)) fail(ErrorCode::MalformedInterval, "expected lower bound", peek(), {"number"});
    Rational lo = parse_rational(advance().text);
    if (!at(Tok::comma)) fail(ErrorCode::MalformedInterval, "expected ','", peek(), {"','"});
    advance();
    if (!at(Tok::number)) fail(ErrorCode::MalformedInterval, "expected upper bound", peek(), {"number"});
    Rational hi = parse_rational(advance().text);
    bool hi_closed;
    if (at(Tok::rbrack)) {
      hi_closed = true;
    } else if (at(Tok::rparen)) {
      hi_closed = false;
    } else {
      fail(ErrorCode::MalformedInterval, "expected ']' or ')'", peek(), {"']'", "')'"});
    }
    advance();
    return Interval{lo, hi, lo_closed, hi_closed};
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const Declarations& decls_;
};

// ---------------------------------------------------------------- printer

// Binding levels: 0 = ~> / -> / <-> / ~[..]~, 1 = |, 2 = &, 3 = prefix.
std::string paren(std::string s, int have, int need) {
  return have < need ? "(" + s + ")" : s;
}

int level(const StaticFormula& f) {
  return std::holds_alternative<st::And>(f.node().v) ? 2 : 3;
}

std::string show(const StaticFormula& f, int need);

std::string show_static(const StaticFormula& f) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, st::Atom>) {
          if (n.args.empty()) return n.symbol;
          std::string out = n.symbol + "(";
          for (std::size_t k = 0; k < n.args.size(); ++k) out += (k ? "," : "") + n.args[k];
          return out + ")";
        } else if constexpr (std::is_same_v<T, st::True>) {
          return "true";
        } else if constexpr (std::is_same_v<T, st::False>) {
          return "false";
        } else if constexpr (std::is_same_v<T, st::Not>) {
          return "!" + show(n.operand, 3);
        } else {
          return show(n.lhs, 2) + " & " + show(n.rhs, 3);
        }
      },
      f.node().v);
}

std::string show(const StaticFormula& f, int need) { return paren(show_static(f), level(f), need); }

int level(const DatasetFormula& f) {
  const auto& v = f.node().v;
  if (std::holds_alternative<ds::Cond>(v) || std::holds_alternative<ds::Indist>(v)) return 0;
  if (std::holds_alternative<ds::And>(v)) return 2;
  return 3;
}

std::string show(const DatasetFormula& f, int need);

std::string show_dataset(const DatasetFormula& f) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, ds::Prob>) {
          return "P" + n.interval.to_string() + " " + show(n.body, 3);
        } else if constexpr (std::is_same_v<T, ds::Not>) {
          return "!" + show(n.operand, 3);
        } else if constexpr (std::is_same_v<T, ds::And>) {
          return show(n.lhs, 2) + " & " + show(n.rhs, 3);
        } else if constexpr (std::is_same_v<T, ds::Transform>) {
          return "<T:" + n.name + "> " + show(n.body, 3);
        } else if constexpr (std::is_same_v<T, ds::Cond>) {
          return show(n.guard, 1) + " ~> " + show(n.body, 0);
        } else if constexpr (std::is_same_v<T, ds::Indist>) {
          return show(n.lhs, 1) + " ~[" + n.variable + "; " + to_literal(n.epsilon) + "; " +
                 n.divergence.to_string() + "]~ " + show(n.rhs, 1);
        } else if constexpr (std::is_same_v<T, ds::Know>) {
          return "K{" + n.relation + "} " + show(n.body, 3);
        } else {
          return "ExpLoss{" + n.loss + "} <= " + to_literal(n.bound);
        }
      },
      f.node().v);
}

std::string show(const DatasetFormula& f, int need) { return paren(show_dataset(f), level(f), need); }

}  // namespace

DatasetFormula parse(std::string_view text, const Declarations& decls) {
  return FormulaParser(text, decls).dataset();
}

StaticFormula parse_static(std::string_view text, const Declarations& decls) {
  return FormulaParser(text, decls).statik();
}

IntervalSet parse_interval(std::string_view text) {
  Declarations none;
  return FormulaParser(text, none).intervals_only();
}

std::string print(const DatasetFormula& f) { return show_dataset(f); }
std::string print(const StaticFormula& f) { return show_static(f); }

}  // namespace mlspec
