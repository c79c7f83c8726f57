#include "mlspec/expr.hpp"

#include <algorithm>
#include <cctype>

#include "mlspec/error.hpp"

namespace mlspec {

struct Expr::Node {
  enum class Op { literal, param, component, neg, lnot, land, lor, add, sub, mul, div,
                  eq, ne, lt, le, gt, ge, in };
  Op op = Op::literal;
  Result literal;
  std::size_t param = 0;
  std::size_t component = 0;
  std::vector<std::shared_ptr<const Node>> kids;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Op = Expr::Node::Op;

struct Token {
  enum class Kind { ident, number, string, punct, end };
  Kind kind;
  std::string text;
  std::size_t column;
};

std::vector<Token> lex(std::string_view text) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) {
    throw SyntaxError(ErrorCode::SyntaxError, msg + " at column " + std::to_string(i + 1), 1, i + 1);
  };
  while (i < text.size()) {
    char c = text[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
      out.push_back({Token::Kind::ident, std::string(text.substr(start, i - start)), start + 1});
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i + 1 < text.size() && text[i] == '.' && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      }
      out.push_back({Token::Kind::number, std::string(text.substr(start, i - start)), start + 1});
    } else if (c == '\'' || c == '"') {
      ++i;
      while (i < text.size() && text[i] != c) ++i;
      if (i >= text.size()) fail("unterminated string");
      out.push_back({Token::Kind::string, std::string(text.substr(start + 1, i - start - 1)), start + 1});
      ++i;
    } else {
      std::string punct(1, c);
      std::string_view pair = text.substr(i, 2);
      if (pair == "!=" || pair == "<=" || pair == ">=" || pair == "==" || pair == "&&" ||
          pair == "||") {
        punct = std::string(pair);
        i += 2;
      } else if (std::string_view("=!<>&|+-*/(){}[],.").find(c) != std::string_view::npos) {
        i += 1;
      } else {
        fail(std::string("unexpected character '") + c + "'");
      }
      if (punct == "==") punct = "=";
      if (punct == "&&") punct = "&";
      if (punct == "||") punct = "|";
      out.push_back({Token::Kind::punct, punct, start + 1});
    }
  }
  out.push_back({Token::Kind::end, "", text.size() + 1});
  return out;
}

class Parser {
 public:
  Parser(std::vector<Token> tokens, const std::vector<std::string>& params,
         const std::vector<std::string>& features)
      : tokens_(std::move(tokens)), params_(params), features_(features) {}

  NodePtr parse() {
    NodePtr root = parse_or();
    if (peek().kind != Token::Kind::end) error("unexpected '" + peek().text + "'", {"end of input"});
    return root;
  }

 private:
  const Token& peek() const { return tokens_[pos_]; }
  bool is_punct(std::string_view p) const {
    return peek().kind == Token::Kind::punct && peek().text == p;
  }
  bool accept(std::string_view p) {
    if (!is_punct(p)) return false;
    ++pos_;
    return true;
  }
  void expect(std::string_view p) {
    if (!accept(p)) error("expected '" + std::string(p) + "'", {std::string(p)});
  }
  [[noreturn]] void error(const std::string& msg, std::vector<std::string> expected) const {
    throw SyntaxError(ErrorCode::SyntaxError,
                      msg + " at column " + std::to_string(peek().column), 1, peek().column,
                      std::move(expected));
  }

  static NodePtr make(Op op, std::vector<NodePtr> kids) {
    auto n = std::make_shared<Expr::Node>();
    n->op = op;
    n->kids = std::move(kids);
    return n;
  }

  NodePtr parse_or() {
    NodePtr lhs = parse_and();
    while (accept("|")) lhs = make(Op::lor, {lhs, parse_and()});
    return lhs;
  }

  NodePtr parse_and() {
    NodePtr lhs = parse_not();
    while (accept("&")) lhs = make(Op::land, {lhs, parse_not()});
    return lhs;
  }

  NodePtr parse_not() {
    if (accept("!")) return make(Op::lnot, {parse_not()});
    return parse_compare();
  }

  NodePtr parse_compare() {
    NodePtr lhs = parse_sum();
    static const std::pair<const char*, Op> ops[] = {{"=", Op::eq}, {"!=", Op::ne}, {"<=", Op::le},
                                                     {">=", Op::ge}, {"<", Op::lt},  {">", Op::gt}};
    for (const auto& [text, op] : ops) {
      if (accept(text)) return make(op, {lhs, parse_sum()});
    }
    if (peek().kind == Token::Kind::ident && peek().text == "in") {
      ++pos_;
      expect("{");
      std::vector<NodePtr> kids{lhs, parse_sum()};
      while (accept(",")) kids.push_back(parse_sum());
      expect("}");
      return make(Op::in, std::move(kids));
    }
    return lhs;
  }

  NodePtr parse_sum() {
    NodePtr lhs = parse_term();
    while (true) {
      if (accept("+")) {
        lhs = make(Op::add, {lhs, parse_term()});
      } else if (accept("-")) {
        lhs = make(Op::sub, {lhs, parse_term()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (accept("*")) {
        lhs = make(Op::mul, {lhs, parse_unary()});
      } else if (accept("/")) {
        lhs = make(Op::div, {lhs, parse_unary()});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept("-")) return make(Op::neg, {parse_unary()});
    return parse_primary();
  }

  NodePtr literal(Expr::Result value) {
    auto n = std::make_shared<Expr::Node>();
    n->op = Op::literal;
    n->literal = std::move(value);
    ++pos_;
    return n;
  }

  NodePtr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Token::Kind::number:
        return literal(parse_rational(t.text));
      case Token::Kind::string:
        return literal(t.text);
      case Token::Kind::ident: {
        if (t.text == "true") return literal(true);
        if (t.text == "false") return literal(false);
        auto it = std::find(params_.begin(), params_.end(), t.text);
        if (it == params_.end()) {
          throw Error(ErrorCode::UnknownVariable,
                      "unknown name '" + t.text + "' at column " + std::to_string(t.column));
        }
        auto n = std::make_shared<Expr::Node>();
        n->op = Op::param;
        n->param = static_cast<std::size_t>(it - params_.begin());
        ++pos_;
        if (accept(".")) {
          if (peek().kind != Token::Kind::ident) error("expected feature name", {"feature name"});
          auto f = std::find(features_.begin(), features_.end(), peek().text);
          if (f == features_.end()) {
            throw Error(ErrorCode::UnknownVariable, "unknown feature '" + peek().text + "'");
          }
          n->op = Op::component;
          n->component = static_cast<std::size_t>(f - features_.begin());
          ++pos_;
        } else if (accept("[")) {
          if (peek().kind != Token::Kind::number) error("expected component index", {"index"});
          n->op = Op::component;
          n->component = std::stoul(peek().text);
          ++pos_;
          expect("]");
        }
        return n;
      }
      case Token::Kind::punct:
        if (accept("(")) {
          NodePtr inner = parse_or();
          expect(")");
          return inner;
        }
        [[fallthrough]];
      case Token::Kind::end:
        break;
    }
    error(t.kind == Token::Kind::end ? "unexpected end of expression" : "unexpected '" + t.text + "'",
          {"number", "string", "name", "("});
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  const std::vector<std::string>& params_;
  const std::vector<std::string>& features_;
};

[[noreturn]] void type_error(const std::string& what) {
  throw Error(ErrorCode::IncompatibleValues, "expression type error: " + what);
}

const Rational& as_number(const Expr::Result& r) {
  if (const auto* q = std::get_if<Rational>(&r)) return *q;
  type_error("expected a number");
}

bool as_bool(const Expr::Result& r) {
  if (const auto* b = std::get_if<bool>(&r)) return *b;
  type_error("expected a boolean");
}

Expr::Result eval(const Expr::Node& n, std::span<const Value* const> args) {
  switch (n.op) {
    case Op::literal:
      return n.literal;
    case Op::param: {
      const Value& v = *args[n.param];
      if (v.is_label()) return v.symbol();
      if (v.components().size() == 1) return v.components().front();
      return v.components();
    }
    case Op::component: {
      const Value& v = *args[n.param];
      if (!v.is_numeric()) type_error("component of label value '" + v.symbol() + "'");
      const NumVec& c = v.components();
      if (n.component >= c.size()) type_error("component index out of range");
      return c[n.component];
    }
    case Op::neg:
      return Rational(-as_number(eval(*n.kids[0], args)));
    case Op::lnot:
      return !as_bool(eval(*n.kids[0], args));
    case Op::land:
      return as_bool(eval(*n.kids[0], args)) && as_bool(eval(*n.kids[1], args));
    case Op::lor:
      return as_bool(eval(*n.kids[0], args)) || as_bool(eval(*n.kids[1], args));
    case Op::add:
      return Rational(as_number(eval(*n.kids[0], args)) + as_number(eval(*n.kids[1], args)));
    case Op::sub:
      return Rational(as_number(eval(*n.kids[0], args)) - as_number(eval(*n.kids[1], args)));
    case Op::mul:
      return Rational(as_number(eval(*n.kids[0], args)) * as_number(eval(*n.kids[1], args)));
    case Op::div: {
      Rational d = as_number(eval(*n.kids[1], args));
      if (d == 0) type_error("division by zero");
      return Rational(as_number(eval(*n.kids[0], args)) / d);
    }
    case Op::eq:
    case Op::ne: {
      Expr::Result a = eval(*n.kids[0], args);
      Expr::Result b = eval(*n.kids[1], args);
      if (a.index() != b.index()) type_error("comparing values of different kinds");
      return (a == b) == (n.op == Op::eq);
    }
    case Op::lt:
      return as_number(eval(*n.kids[0], args)) < as_number(eval(*n.kids[1], args));
    case Op::le:
      return as_number(eval(*n.kids[0], args)) <= as_number(eval(*n.kids[1], args));
    case Op::gt:
      return as_number(eval(*n.kids[0], args)) > as_number(eval(*n.kids[1], args));
    case Op::ge:
      return as_number(eval(*n.kids[0], args)) >= as_number(eval(*n.kids[1], args));
    case Op::in: {
      Expr::Result a = eval(*n.kids[0], args);
      for (std::size_t k = 1; k < n.kids.size(); ++k) {
        if (eval(*n.kids[k], args) == a) return true;
      }
      return false;
    }
  }
  type_error("unknown node");
}

}  // namespace

Expr Expr::compile(std::string_view text, std::vector<std::string> params,
                   const std::vector<std::string>& feature_names) {
  Expr e;
  e.source_ = std::string(text);
  e.params_ = std::move(params);
  Parser p(lex(text), e.params_, feature_names);
  e.root_ = p.parse();
  return e;
}

Expr::Result Expr::evaluate(std::span<const Value* const> args) const {
  if (args.size() != params_.size()) {
    throw Error(ErrorCode::ArityMismatch, "expression '" + source_ + "' expects " +
                                              std::to_string(params_.size()) + " arguments");
  }
  return eval(*root_, args);
}

bool Expr::holds(std::span<const Value* const> args) const {
  Result r = evaluate(args);
  if (const auto* b = std::get_if<bool>(&r)) return *b;
  throw Error(ErrorCode::IncompatibleValues, "expression '" + source_ + "' is not a condition");
}

}  // namespace mlspec
