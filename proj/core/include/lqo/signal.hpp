#pragma once

// Scalar input signals u(t) written as expressions, e.g. "0.01*cos(2*t)".
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?        right associative
//   primary := number | 't' | func '(' expr ')' | '(' expr ')'
//   func    := sin | cos | exp

#include <memory>
#include <string>
#include <string_view>

namespace lqo {

class SignalExpr {
 public:
  struct Node;

  /// Throws ValidationError with the byte offset of the first bad token.
  static SignalExpr parse(std::string_view text);

  /// Throws ValidationError on division by zero or a non-finite result.
  double operator()(double t) const;

  const std::string& source() const { return source_; }

 private:
  SignalExpr(std::shared_ptr<const Node> root, std::string source)
      : root_(std::move(root)), source_(std::move(source)) {}

  std::shared_ptr<const Node> root_;
  std::string source_;
};

inline SignalExpr parse_signal(std::string_view text) { return SignalExpr::parse(text); }

}  // namespace lqo
