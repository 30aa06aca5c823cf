#include "plw/expression.hpp"

#include <cctype>
#include <cmath>
#include <numbers>
#include <vector>

#include "plw/errors.hpp"

namespace plw {

struct Expression::Node {
  enum class Op { constant, var, neg, add, sub, mul, div, pow, sin, cos, exp, abs, min, max };
  Op op = Op::constant;
  double value = 0.0;
  int var = 0;  // 0..3 = x, y, z, t
  std::shared_ptr<const Node> a;
  std::shared_ptr<const Node> b;

  double eval(const double* v) const {
    switch (op) {
      case Op::constant: return value;
      case Op::var: return v[var];
      case Op::neg: return -a->eval(v);
      case Op::add: return a->eval(v) + b->eval(v);
      case Op::sub: return a->eval(v) - b->eval(v);
      case Op::mul: return a->eval(v) * b->eval(v);
      case Op::div: return a->eval(v) / b->eval(v);
      case Op::pow: return std::pow(a->eval(v), b->eval(v));
      case Op::sin: return std::sin(a->eval(v));
      case Op::cos: return std::cos(a->eval(v));
      case Op::exp: return std::exp(a->eval(v));
      case Op::abs: return std::abs(a->eval(v));
      case Op::min: return std::min(a->eval(v), b->eval(v));
      case Op::max: return std::max(a->eval(v), b->eval(v));
    }
    return 0.0;
  }

  bool uses_time() const {
    if (op == Op::var) return var == 3;
    return (a && a->uses_time()) || (b && b->uses_time());
  }
};

namespace {

using NodePtr = std::shared_ptr<const Expression::Node>;
using Op = Expression::Node::Op;

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Expression::Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NodePtr constant(double v) {
  auto n = std::make_shared<Expression::Node>();
  n->value = v;
  return n;
}

// expr   := term (('+'|'-') term)*
// term   := unary (('*'|'/') unary)*
// unary  := '-' unary | power
// power  := atom ('^' unary)?
class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr parse() {
    NodePtr n = expr();
    skip();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return n;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw InvalidArgument("expression '" + s_ + "': " + what + " at position " + std::to_string(pos_));
  }

  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }

  NodePtr expr() {
    NodePtr n = term();
    for (;;) {
      if (accept('+')) n = make(Op::add, n, term());
      else if (accept('-')) n = make(Op::sub, n, term());
      else return n;
    }
  }

  NodePtr term() {
    NodePtr n = unary();
    for (;;) {
      if (accept('*')) n = make(Op::mul, n, unary());
      else if (accept('/')) n = make(Op::div, n, unary());
      else return n;
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::neg, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr n = atom();
    if (accept('^')) return make(Op::pow, n, unary());
    return n;
  }

  NodePtr atom() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end");
    const char c = s_[pos_];
    if (accept('(')) {
      NodePtr n = expr();
      expect(')');
      return n;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("bad number");
      pos_ += static_cast<std::size_t>(end - begin);
      return constant(v);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      if (id == "x" || id == "y" || id == "z" || id == "t") {
        auto n = std::make_shared<Expression::Node>();
        n->op = Op::var;
        n->var = id == "x" ? 0 : id == "y" ? 1 : id == "z" ? 2 : 3;
        return n;
      }
      if (id == "pi") return constant(std::numbers::pi);
      if (id == "e") return constant(std::numbers::e);
      const std::vector<std::pair<std::string, Op>> unary_fns{
          {"sin", Op::sin}, {"cos", Op::cos}, {"exp", Op::exp}, {"abs", Op::abs}};
      for (const auto& [name, op] : unary_fns)
        if (id == name) {
          expect('(');
          NodePtr a = expr();
          expect(')');
          return make(op, a);
        }
      if (id == "min" || id == "max") {
        expect('(');
        NodePtr a = expr();
        expect(',');
        NodePtr b = expr();
        expect(')');
        return make(id == "min" ? Op::min : Op::max, a, b);
      }
      pos_ = start;
      fail("unknown identifier '" + id + "'");
    }
    fail(std::string("unexpected '") + c + "'");
  }

  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

Expression::Expression() : text_("0"), root_(constant(0.0)) {}

Expression::Expression(const std::string& text) : text_(text), root_(Parser(text).parse()) {}

double Expression::operator()(double x, double y, double z, double t) const {
  const double v[4] = {x, y, z, t};
  return root_->eval(v);
}

bool Expression::steady() const { return !root_->uses_time(); }

}  // namespace plw
