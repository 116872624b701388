#include "metaplab/expr.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>

namespace metaplab {

struct Expr::Node {
  enum class Kind { number, variable, negate, add, sub, mul, div, pow, exp, sin, cos, sqrt } kind;
  double value = 0;
  int var = 0;  // 0 x, 1 xi, 2 u, 3 v
  std::shared_ptr<const Node> a, b;
};

namespace {

using NodePtr = std::shared_ptr<const Expr::Node>;
using Kind = Expr::Node::Kind;

NodePtr leaf(double value) { return std::make_shared<Expr::Node>(Expr::Node{Kind::number, value, 0, {}, {}}); }
NodePtr var(int index) { return std::make_shared<Expr::Node>(Expr::Node{Kind::variable, 0, index, {}, {}}); }
NodePtr node(Kind k, NodePtr a, NodePtr b = {}) {
  return std::make_shared<Expr::Node>(Expr::Node{k, 0, 0, std::move(a), std::move(b)});
}

class Parser {
 public:
  explicit Parser(const std::string& s) : s_(s) {}

  NodePtr run() {
    NodePtr e = sum();
    skip();
    if (pos_ < s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return e;
  }

  std::vector<std::string> vars;

 private:
  const std::string& s_;
  size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("expression '" + s_ + "': " + what + " at column " + std::to_string(pos_ + 1));
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

  NodePtr sum() {
    NodePtr e = product();
    for (;;) {
      if (accept('+')) e = node(Kind::add, e, product());
      else if (accept('-')) e = node(Kind::sub, e, product());
      else return e;
    }
  }

  NodePtr product() {
    NodePtr e = unary();
    for (;;) {
      if (accept('*')) e = node(Kind::mul, e, unary());
      else if (accept('/')) e = node(Kind::div, e, unary());
      else return e;
    }
  }

  NodePtr unary() {
    if (accept('-')) return node(Kind::negate, unary());
    if (accept('+')) return unary();
    return power();
  }

  NodePtr power() {
    NodePtr base = primary();
    if (accept('^')) return node(Kind::pow, base, unary());
    return base;
  }

  NodePtr primary() {
    skip();
    if (pos_ >= s_.size()) fail("unexpected end of input");
    const char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double value = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<size_t>(end - begin);
      return leaf(value);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      const std::string id = s_.substr(start, pos_ - start);
      static const std::vector<std::string> names{"x", "xi", "u", "v"};
      if (auto it = std::find(names.begin(), names.end(), id); it != names.end()) {
        if (std::find(vars.begin(), vars.end(), id) == vars.end()) vars.push_back(id);
        return var(static_cast<int>(it - names.begin()));
      }
      if (id == "pi") return leaf(pi);
      Kind k;
      if (id == "exp") k = Kind::exp;
      else if (id == "sin") k = Kind::sin;
      else if (id == "cos") k = Kind::cos;
      else if (id == "sqrt") k = Kind::sqrt;
      else {
        pos_ = start;
        fail("unknown identifier '" + id + "'");
      }
      if (!accept('(')) fail("expected '(' after " + id);
      NodePtr arg = sum();
      if (!accept(')')) fail("expected ')'");
      return node(k, arg);
    }
    if (accept('(')) {
      NodePtr e = sum();
      if (!accept(')')) fail("expected ')'");
      return e;
    }
    fail("unexpected '" + std::string(1, c) + "'");
  }
};

double eval(const Expr::Node& n, const double* vals) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::variable: return vals[n.var];
    case Kind::negate: return -eval(*n.a, vals);
    case Kind::add: return eval(*n.a, vals) + eval(*n.b, vals);
    case Kind::sub: return eval(*n.a, vals) - eval(*n.b, vals);
    case Kind::mul: return eval(*n.a, vals) * eval(*n.b, vals);
    case Kind::div: return eval(*n.a, vals) / eval(*n.b, vals);
    case Kind::pow: return std::pow(eval(*n.a, vals), eval(*n.b, vals));
    case Kind::exp: return std::exp(eval(*n.a, vals));
    case Kind::sin: return std::sin(eval(*n.a, vals));
    case Kind::cos: return std::cos(eval(*n.a, vals));
    case Kind::sqrt: return std::sqrt(eval(*n.a, vals));
  }
  return 0;
}

}  // namespace

Expr Expr::parse(const std::string& text) {
  Parser p(text);
  Expr e;
  e.text_ = text;
  e.root_ = p.run();
  e.vars_ = p.vars;
  return e;
}

double Expr::operator()(double x, double xi, double u, double v) const {
  if (!root_) throw ValidationError("expression: empty");
  const double vals[4] = {x, xi, u, v};
  return eval(*root_, vals);
}

bool Expr::uses(const std::string& variable) const {
  return std::find(vars_.begin(), vars_.end(), variable) != vars_.end();
}

}  // namespace metaplab
