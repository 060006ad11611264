// Scalar expression grammar shared by the CLI and the table data files:
// numbers (exact decimals), parameters, the constants i / zeta3 / phi7,
// + - * / ^ with integer or (p/q) exponents, and the root functions
// sqrt / cbrt / rt7 expanded with the principal-root convention.
#ifndef EVO3_SCALAR_EXPR_HPP
#define EVO3_SCALAR_EXPR_HPP

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "evo3/field.hpp"

namespace evo3 {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

class Expr {
 public:
  enum class Kind { Number, Symbol, Add, Mul, Pow, Neg };

  Kind kind;
  std::string text;                 // Number: literal; Symbol: name
  std::vector<ExprPtr> args;        // Add/Mul operands; Pow/Neg operand in args[0]
  std::vector<bool> negated;        // Add: subtraction flags; Mul: division flags
  long exp_num = 1;                 // Pow exponent p (of p/q)
  long exp_den = 1;                 // Pow exponent q

  std::string str() const;
};

/// Parse an expression in the scalar grammar. Throws ParseError.
ExprPtr parse_expr(const std::string& src);

/// Distinct radical occurrences (root degree > 1) keyed by (base.str(), q);
/// used to enumerate root branches in the verification harness.
std::vector<std::pair<std::string, unsigned>> radical_keys(const ExprPtr& e);

template <class K>
struct EvalEnv {
  std::map<std::string, K> vars;
  unsigned phi_root = 7;   // phi7 token evaluates to e^{2*pi*i/phi_root}
  unsigned zeta_root = 3;  // zeta3 token evaluates to e^{2*pi*i/zeta_root}
  // branch index per radical key; absent = principal branch
  std::map<std::pair<std::string, unsigned>, unsigned> branches;
};

/// Evaluate over the field K. Unbound symbols and line constants unavailable
/// in the backend (i on the rational side) throw.
template <class K>
K eval_expr(const ExprPtr& e, const EvalEnv<K>& env);

/// CLI scalar literal: an expression with no free parameters.
template <class K>
K parse_scalar(const std::string& src) {
  return eval_expr<K>(parse_expr(src), EvalEnv<K>{});
}

extern template Cx eval_expr<Cx>(const ExprPtr&, const EvalEnv<Cx>&);
extern template Rational eval_expr<Rational>(const ExprPtr&, const EvalEnv<Rational>&);

}  // namespace evo3

#endif  // EVO3_SCALAR_EXPR_HPP
