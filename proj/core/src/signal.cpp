#include "lqo/signal.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

#include "lqo/errors.hpp"

namespace lqo {

struct SignalExpr::Node {
  enum class Kind { number, time, negate, add, sub, mul, div, pow, sin, cos, exp };
  Kind kind = Kind::number;
  double value = 0.0;
  std::unique_ptr<Node> lhs;
  std::unique_ptr<Node> rhs;
};

namespace {

using Node = SignalExpr::Node;
using Kind = Node::Kind;

std::unique_ptr<Node> leaf(Kind kind, double value = 0.0) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->value = value;
  return n;
}

std::unique_ptr<Node> branch(Kind kind, std::unique_ptr<Node> lhs, std::unique_ptr<Node> rhs = {}) {
  auto n = std::make_unique<Node>();
  n->kind = kind;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  std::unique_ptr<Node> parse() {
    auto root = expr();
    skip_space();
    if (pos_ < text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return root;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError("signal syntax error at byte " + std::to_string(pos_) + ": " + what,
                          "offset " + std::to_string(pos_));
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      fail(pos_ < text_.size() ? "expected '" + std::string(1, c) + "'"
                               : "expected '" + std::string(1, c) + "' before end of input");
    }
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = branch(Kind::add, std::move(lhs), term());
      } else if (accept('-')) {
        lhs = branch(Kind::sub, std::move(lhs), term());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = branch(Kind::mul, std::move(lhs), unary());
      } else if (accept('/')) {
        lhs = branch(Kind::div, std::move(lhs), unary());
      } else {
        return lhs;
      }
    }
  }

  std::unique_ptr<Node> unary() {
    if (accept('-')) return branch(Kind::negate, unary());
    return power();
  }

  std::unique_ptr<Node> power() {
    auto base = primary();
    if (accept('^')) return branch(Kind::pow, std::move(base), unary());
    return base;
  }

  std::unique_ptr<Node> primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      auto inner = expr();
      expect(')');
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return identifier();
    fail("unexpected '" + std::string(1, c) + "'");
  }

  std::unique_ptr<Node> number() {
    double v = 0.0;
    const char* first = text_.data() + pos_;
    const char* last = text_.data() + text_.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr == first) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - first);
    return leaf(Kind::number, v);
  }

  std::unique_ptr<Node> identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "t") return leaf(Kind::time);

    Kind kind;
    if (name == "sin") {
      kind = Kind::sin;
    } else if (name == "cos") {
      kind = Kind::cos;
    } else if (name == "exp") {
      kind = Kind::exp;
    } else {
      pos_ = start;
      fail("unknown identifier '" + std::string(name) + "'");
    }
    expect('(');
    auto arg = expr();
    expect(')');
    return branch(kind, std::move(arg));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double eval(const Node& n, double t) {
  switch (n.kind) {
    case Kind::number: return n.value;
    case Kind::time: return t;
    case Kind::negate: return -eval(*n.lhs, t);
    case Kind::add: return eval(*n.lhs, t) + eval(*n.rhs, t);
    case Kind::sub: return eval(*n.lhs, t) - eval(*n.rhs, t);
    case Kind::mul: return eval(*n.lhs, t) * eval(*n.rhs, t);
    case Kind::div: {
      const double num = eval(*n.lhs, t);
      const double den = eval(*n.rhs, t);
      if (den == 0.0) {
        std::ostringstream os;
        os << "signal divides by zero at t = " << t;
        throw ValidationError(os.str());
      }
      return num / den;
    }
    case Kind::pow: return std::pow(eval(*n.lhs, t), eval(*n.rhs, t));
    case Kind::sin: return std::sin(eval(*n.lhs, t));
    case Kind::cos: return std::cos(eval(*n.lhs, t));
    case Kind::exp: return std::exp(eval(*n.lhs, t));
  }
  return 0.0;
}

}  // namespace

SignalExpr SignalExpr::parse(std::string_view text) {
  Parser parser(text);
  std::shared_ptr<const Node> root = parser.parse();
  return SignalExpr(std::move(root), std::string(text));
}

double SignalExpr::operator()(double t) const {
  const double v = eval(*root_, t);
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "signal '" << source_ << "' is not finite at t = " << t;
    throw ValidationError(os.str());
  }
  return v;
}

}  // namespace lqo
