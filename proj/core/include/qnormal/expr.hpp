#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "qnormal/numeric.hpp"

namespace qnormal {

/// Closed-form rule expressions over the schedule index `i`:
///   expr   := term (('+' | '-') term)*
///   term   := factor (('*' | '/') factor)*
///   factor := base ('^' factor)?
///   base   := integer | 'i' | '(' expr ')' | 'min' '(' expr ',' expr ')'
/// Evaluation is exact rational; '^' requires a non-negative integer exponent.
class RuleExpr {
 public:
  static RuleExpr parse(std::string_view text);

  Rational eval(const BigInt& i) const;
  /// eval() that must land on an integer.
  BigInt eval_integer(const BigInt& i) const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  RuleExpr(std::shared_ptr<const Node> root, std::string text);
  std::shared_ptr<const Node> root_;
  std::string text_;
};

}  // namespace qnormal
