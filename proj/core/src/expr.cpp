#include "qnormal/expr.hpp"

#include "qnormal/error.hpp"

#include <cctype>
#include <vector>

namespace qnormal {

struct RuleExpr::Node {
  enum class Op { constant, var, add, sub, mul, div, pow, min } op;
  Rational value;
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = RuleExpr::Node;
using NodePtr = std::shared_ptr<const Node>;

struct Parser {
  std::string_view text;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    raise(Errc::bad_config,
          msg + " at offset " + std::to_string(pos) + " in '" + std::string(text) + "'");
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  NodePtr make(Node::Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr, Rational v = 0) {
    auto n = std::make_shared<Node>();
    n->op = op;
    n->value = std::move(v);
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return n;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (eat('+'))
        lhs = make(Node::Op::add, lhs, parse_term());
      else if (eat('-'))
        lhs = make(Node::Op::sub, lhs, parse_term());
      else
        return lhs;
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_factor();
    while (true) {
      if (eat('*'))
        lhs = make(Node::Op::mul, lhs, parse_factor());
      else if (eat('/'))
        lhs = make(Node::Op::div, lhs, parse_factor());
      else
        return lhs;
    }
  }

  NodePtr parse_factor() {
    NodePtr base = parse_base();
    if (eat('^')) return make(Node::Op::pow, base, parse_factor());  // right associative
    return base;
  }

  NodePtr parse_base() {
    skip_ws();
    if (pos >= text.size()) fail("unexpected end of expression");
    const char c = text[pos];
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = pos;
      while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
      return make(Node::Op::constant, nullptr, nullptr,
                  Rational(BigInt(std::string(text.substr(start, pos - start)))));
    }
    if (c == 'i') {
      ++pos;
      return make(Node::Op::var);
    }
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("missing ')'");
      return inner;
    }
    if (text.substr(pos, 3) == "min") {
      pos += 3;
      if (!eat('(')) fail("min needs '('");
      NodePtr a = parse_expr();
      if (!eat(',')) fail("min needs two arguments");
      NodePtr b = parse_expr();
      if (!eat(')')) fail("missing ')' after min");
      return make(Node::Op::min, a, b);
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }
};

Rational eval_node(const Node& node, const BigInt& i) {
  switch (node.op) {
    case Node::Op::constant:
      return node.value;
    case Node::Op::var:
      return Rational(i);
    case Node::Op::add:
      return eval_node(*node.lhs, i) + eval_node(*node.rhs, i);
    case Node::Op::sub:
      return eval_node(*node.lhs, i) - eval_node(*node.rhs, i);
    case Node::Op::mul:
      return eval_node(*node.lhs, i) * eval_node(*node.rhs, i);
    case Node::Op::div: {
      const Rational denom = eval_node(*node.rhs, i);
      if (denom == 0) raise(Errc::bad_config, "division by zero in rule expression");
      return eval_node(*node.lhs, i) / denom;
    }
    case Node::Op::pow: {
      const Rational base = eval_node(*node.lhs, i);
      const Rational exp = eval_node(*node.rhs, i);
      if (denominator(exp) != 1 || numerator(exp) < 0)
        raise(Errc::bad_config, "exponent must be a non-negative integer");
      if (numerator(exp) > 1'000'000)
        raise(Errc::bad_config, "exponent too large in rule expression");
      const auto e = numerator(exp).convert_to<std::uint64_t>();
      return Rational(ipow(numerator(base), e), ipow(denominator(base), e));
    }
    case Node::Op::min: {
      const Rational a = eval_node(*node.lhs, i);
      const Rational b = eval_node(*node.rhs, i);
      return a < b ? a : b;
    }
  }
  raise(Errc::internal, "unreachable");
}

}  // namespace

RuleExpr::RuleExpr(std::shared_ptr<const Node> root, std::string text)
    : root_(std::move(root)), text_(std::move(text)) {}

RuleExpr RuleExpr::parse(std::string_view text) {
  Parser parser{text};
  NodePtr root = parser.parse_expr();
  parser.skip_ws();
  if (parser.pos != text.size()) parser.fail("trailing characters");
  return RuleExpr(std::move(root), std::string(text));
}

Rational RuleExpr::eval(const BigInt& i) const { return eval_node(*root_, i); }

BigInt RuleExpr::eval_integer(const BigInt& i) const {
  const Rational v = eval(i);
  if (denominator(v) != 1)
    raise(Errc::bad_config, "rule '" + text_ + "' is not integral at i = " + i.str());
  return numerator(v);
}

}  // namespace qnormal
