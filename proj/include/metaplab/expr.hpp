#pragma once

#include <memory>
#include <string>
#include <vector>

#include "metaplab/core.hpp"

namespace metaplab {

// Real arithmetic expression over the variables x, xi, u, v and the constant pi.
// Grammar: sum := product (('+' | '-') product)*
//          product := unary (('*' | '/') unary)*
//          unary := ('+' | '-') unary | power
//          power := primary ('^' unary)?            (right associative)
//          primary := number | variable | pi | func '(' sum ')' | '(' sum ')'
//          func := exp | sin | cos | sqrt
class Expr {
 public:
  struct Node;

  // Throws ValidationError naming the 1-based column of the offending token.
  static Expr parse(const std::string& text);

  double operator()(double x, double xi = 0, double u = 0, double v = 0) const;
  bool uses(const std::string& variable) const;
  const std::string& text() const { return text_; }

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
  std::vector<std::string> vars_;
};

}  // namespace metaplab
