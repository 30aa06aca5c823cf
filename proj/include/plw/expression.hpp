#pragma once

#include <memory>
#include <string>

namespace plw {

// Arithmetic expressions over x, y, z, t:
//   numbers, + - * / ^, unary -, parentheses, pi, e,
//   sin cos exp abs (one argument), min max (two arguments).
class Expression {
 public:
  struct Node;

  Expression();
  explicit Expression(const std::string& text);  // throws InvalidArgument on syntax errors

  double operator()(double x, double y, double z, double t) const;
  const std::string& text() const { return text_; }
  // True when the expression does not mention t.
  bool steady() const;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

}  // namespace plw
