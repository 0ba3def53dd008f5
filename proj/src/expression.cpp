#include "solitonforge/expression.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <stdexcept>

namespace solitonforge {

namespace {

using Node = std::function<double(const Vector&)>;

class Parser {
 public:
  Parser(const std::string& text, int n) : text_(text), n_(n) {}

  Node parse() {
    Node root = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) {
      fail("unexpected trailing input");
    }
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::invalid_argument("expression error at position " + std::to_string(pos_) +
                                ": " + msg);
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  bool consume(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  Node parse_sum() {
    Node lhs = parse_product();
    while (true) {
      if (consume('+')) {
        Node rhs = parse_product();
        lhs = [l = std::move(lhs), r = std::move(rhs)](const Vector& x) {
          return l(x) + r(x);
        };
      } else if (consume('-')) {
        Node rhs = parse_product();
        lhs = [l = std::move(lhs), r = std::move(rhs)](const Vector& x) {
          return l(x) - r(x);
        };
      } else {
        return lhs;
      }
    }
  }

  Node parse_product() {
    Node lhs = parse_unary();
    while (true) {
      if (consume('*')) {
        Node rhs = parse_unary();
        lhs = [l = std::move(lhs), r = std::move(rhs)](const Vector& x) {
          return l(x) * r(x);
        };
      } else if (consume('/')) {
        Node rhs = parse_unary();
        lhs = [l = std::move(lhs), r = std::move(rhs)](const Vector& x) {
          return l(x) / r(x);
        };
      } else {
        return lhs;
      }
    }
  }

  // Unary sign binds looser than '^', so -2^2 is -(2^2); the exponent is a
  // unary again, making '^' right-associative and 2^-3 legal.
  Node parse_unary() {
    if (consume('-')) {
      Node inner = parse_unary();
      return [inner = std::move(inner)](const Vector& x) { return -inner(x); };
    }
    if (consume('+')) {
      return parse_unary();
    }
    return parse_power();
  }

  Node parse_power() {
    Node base = parse_primary();
    if (consume('^')) {
      Node expo = parse_unary();
      return [b = std::move(base), e = std::move(expo)](const Vector& x) {
        return std::pow(b(x), e(x));
      };
    }
    return base;
  }

  Node parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Node inner = parse_sum();
      if (!consume(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      return parse_number();
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      return parse_identifier();
    }
    fail(std::string("unexpected character '") + c + "'");
  }

  Node parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<std::size_t>(end - begin);
    return [v](const Vector&) { return v; };
  }

  Node parse_identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string name = text_.substr(start, pos_ - start);

    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(name[i]))) digits = false;
      }
      if (digits) {
        const int idx = std::stoi(name.substr(1));
        if (idx < 1 || idx > n_) {
          fail("variable " + name + " out of range for dimension " + std::to_string(n_));
        }
        return [idx](const Vector& x) { return x[idx - 1]; };
      }
    }
    if (name == "pi") {
      return [](const Vector&) { return std::numbers::pi; };
    }
    if (name == "e") {
      return [](const Vector&) { return std::numbers::e; };
    }

    if (!consume('(')) fail("unknown identifier '" + name + "'");
    Node arg = parse_sum();
    if (!consume(')')) fail("expected ')' after function argument");

    double (*fn)(double) = nullptr;
    if (name == "exp") fn = std::exp;
    else if (name == "log") fn = std::log;
    else if (name == "sin") fn = std::sin;
    else if (name == "cos") fn = std::cos;
    else if (name == "tan") fn = std::tan;
    else if (name == "sqrt") fn = std::sqrt;
    else if (name == "abs") fn = std::fabs;
    else fail("unknown function '" + name + "'");
    return [fn, arg = std::move(arg)](const Vector& x) { return fn(arg(x)); };
  }

  const std::string& text_;
  int n_;
  std::size_t pos_ = 0;
};

}  // namespace

ScalarField::Evaluator compile_expression(const std::string& text, int n) {
  if (n < 1) {
    throw std::invalid_argument("compile_expression: dimension must be >= 1");
  }
  Node node = Parser(text, n).parse();
  return [node = std::move(node), n](const Vector& x) {
    if (x.size() != n) {
      throw std::invalid_argument("expression evaluator: wrong point dimension");
    }
    return node(x);
  };
}

ScalarField expression_field(const std::string& text, int n, FdOptions options) {
  return ScalarField::finite_difference(n, compile_expression(text, n), options);
}

}  // namespace solitonforge
