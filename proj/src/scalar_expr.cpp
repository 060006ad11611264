#include "evo3/scalar_expr.hpp"

#include <cctype>
#include <sstream>

namespace evo3 {

namespace {

struct Lexer {
  std::string_view src;
  size_t pos = 0;

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }
  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }
  char get() {
    skip_ws();
    return pos < src.size() ? src[pos++] : '\0';
  }
  bool eat(char c) {
    if (peek() == c) { ++pos; return true; }
    return false;
  }
  std::string ident() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_'))
      ++pos;
    return std::string(src.substr(start, pos - start));
  }
  std::string number() {
    skip_ws();
    size_t start = pos;
    while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    if (pos < src.size() && src[pos] == '.') {
      ++pos;
      while (pos < src.size() && std::isdigit(static_cast<unsigned char>(src[pos]))) ++pos;
    }
    return std::string(src.substr(start, pos - start));
  }
};

struct Parser {
  Lexer lex;

  [[noreturn]] void fail(const std::string& what) {
    throw ParseError(what + " at position " + std::to_string(lex.pos) + " in '" +
                     std::string(lex.src) + "'");
  }

  static ExprPtr mk(Expr::Kind k) {
    auto e = std::make_shared<Expr>();
    e->kind = k;
    return e;
  }

  ExprPtr expr() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Add;
    node->args.push_back(term());
    node->negated.push_back(false);
    for (;;) {
      char c = lex.peek();
      if (c == '+' || c == '-') {
        lex.get();
        node->args.push_back(term());
        node->negated.push_back(c == '-');
      } else {
        break;
      }
    }
    if (node->args.size() == 1 && !node->negated[0]) return node->args[0];
    return node;
  }

  ExprPtr term() {
    auto node = std::make_shared<Expr>();
    node->kind = Expr::Kind::Mul;
    node->args.push_back(factor());
    node->negated.push_back(false);
    for (;;) {
      char c = lex.peek();
      if (c == '*' || c == '/') {
        lex.get();
        node->args.push_back(factor());
        node->negated.push_back(c == '/');
      } else {
        break;
      }
    }
    if (node->args.size() == 1 && !node->negated[0]) return node->args[0];
    return node;
  }

  // unary minus binds looser than '^': -x^2 is -(x^2)
  ExprPtr factor() {
    if (lex.peek() == '-') {
      lex.get();
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Neg;
      node->args.push_back(factor());
      return node;
    }
    if (lex.peek() == '+') lex.get();
    return power();
  }

  ExprPtr power() {
    ExprPtr base = primary();
    if (lex.peek() != '^') return base;
    lex.get();
    long p = 1, q = 1;
    bool paren = lex.eat('(');
    bool neg = lex.eat('-');
    std::string num = lex.number();
    if (num.empty()) fail("expected exponent");
    p = std::stol(num) * (neg ? -1 : 1);
    if (paren) {
      if (lex.eat('/')) {
        std::string den = lex.number();
        if (den.empty()) fail("expected exponent denominator");
        q = std::stol(den);
      }
      if (!lex.eat(')')) fail("expected ')' after exponent");
    }
    auto node = mk(Expr::Kind::Pow);
    auto n = std::const_pointer_cast<Expr>(node);
    n->args.push_back(base);
    n->exp_num = p;
    n->exp_den = q;
    return node;
  }

  ExprPtr primary() {
    char c = lex.peek();
    if (c == '(') {
      lex.get();
      ExprPtr inner = expr();
      if (!lex.eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Number;
      node->text = lex.number();
      // literal imaginary part: "3i" (the token must end right after the i)
      if (lex.pos < lex.src.size() && lex.src[lex.pos] == 'i' &&
          (lex.pos + 1 == lex.src.size() ||
           !(std::isalnum(static_cast<unsigned char>(lex.src[lex.pos + 1])) ||
             lex.src[lex.pos + 1] == '_'))) {
        ++lex.pos;
        auto unit = std::make_shared<Expr>();
        unit->kind = Expr::Kind::Symbol;
        unit->text = "i";
        auto mul = std::make_shared<Expr>();
        mul->kind = Expr::Kind::Mul;
        mul->args = {node, unit};
        mul->negated = {false, false};
        return mul;
      }
      return node;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::string name = lex.ident();
      if (name.empty()) fail("expected identifier");
      unsigned root = name == "sqrt" ? 2 : name == "cbrt" ? 3 : name == "rt7" ? 7 : 0;
      if (root != 0 && lex.peek() == '(') {
        lex.get();
        ExprPtr arg = expr();
        if (!lex.eat(')')) fail("expected ')' after root argument");
        auto node = std::make_shared<Expr>();
        node->kind = Expr::Kind::Pow;
        node->args.push_back(arg);
        node->exp_num = 1;
        node->exp_den = static_cast<long>(root);
        return node;
      }
      auto node = std::make_shared<Expr>();
      node->kind = Expr::Kind::Symbol;
      node->text = name;
      return node;
    }
    fail("unexpected character");
  }
};

}  // namespace

ExprPtr parse_expr(const std::string& src) {
  Parser p{Lexer{src}};
  ExprPtr e = p.expr();
  p.lex.skip_ws();
  if (p.lex.pos != src.size()) p.fail("trailing input");
  return e;
}

std::string Expr::str() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::Number: os << text; break;
    case Kind::Symbol: os << text; break;
    case Kind::Neg: os << "-(" << args[0]->str() << ")"; break;
    case Kind::Add:
      os << "(";
      for (size_t k = 0; k < args.size(); ++k) {
        if (k) os << (negated[k] ? " - " : " + ");
        else if (negated[k]) os << "-";
        os << args[k]->str();
      }
      os << ")";
      break;
    case Kind::Mul:
      os << "(";
      for (size_t k = 0; k < args.size(); ++k) {
        if (k) os << (negated[k] ? "/" : "*");
        os << args[k]->str();
      }
      os << ")";
      break;
    case Kind::Pow:
      os << "(" << args[0]->str() << ")^(" << exp_num << "/" << exp_den << ")";
      break;
  }
  return os.str();
}

std::vector<std::pair<std::string, unsigned>> radical_keys(const ExprPtr& e) {
  std::vector<std::pair<std::string, unsigned>> keys;
  auto add = [&keys](std::pair<std::string, unsigned> k) {
    for (auto& existing : keys)
      if (existing == k) return;
    keys.push_back(std::move(k));
  };
  std::vector<ExprPtr> stack{e};
  while (!stack.empty()) {
    ExprPtr cur = stack.back();
    stack.pop_back();
    if (cur->kind == Expr::Kind::Pow && cur->exp_den > 1)
      add({cur->args[0]->str(), static_cast<unsigned>(cur->exp_den)});
    for (auto& a : cur->args) stack.push_back(a);
  }
  return keys;
}

namespace {

template <class K>
K number_value(const std::string& text) {
  auto dot = text.find('.');
  if (dot == std::string::npos) {
    if constexpr (field_traits<K>::exact) {
      return Rational(mpq_class(text));
    } else {
      return K(std::stod(text));
    }
  }
  if constexpr (field_traits<K>::exact) {
    // exact decimal: digits scaled by a power of ten
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac = text.size() - dot - 1;
    mpz_class num;
    num.set_str(digits.empty() ? "0" : digits, 10);
    mpz_class den = 1;
    for (size_t k = 0; k < frac; ++k) den *= 10;
    return Rational(mpq_class(num, den));
  } else {
    return K(std::stod(text));
  }
}

}  // namespace

template <class K>
K eval_expr(const ExprPtr& e, const EvalEnv<K>& env) {
  using FT = field_traits<K>;
  switch (e->kind) {
    case Expr::Kind::Number:
      return number_value<K>(e->text);
    case Expr::Kind::Symbol: {
      const std::string& n = e->text;
      if (auto it = env.vars.find(n); it != env.vars.end()) return it->second;
      if (n == "i") return FT::imaginary_unit();
      if (n == "zeta3") return FT::root_of_unity(env.zeta_root);
      if (n == "phi7") return FT::root_of_unity(env.phi_root);
      throw ParseError("unbound symbol '" + n + "'");
    }
    case Expr::Kind::Neg:
      return FT::zero() - eval_expr<K>(e->args[0], env);
    case Expr::Kind::Add: {
      K acc = FT::zero();
      for (size_t k = 0; k < e->args.size(); ++k) {
        K v = eval_expr<K>(e->args[k], env);
        if (e->negated[k]) acc -= v; else acc += v;
      }
      return acc;
    }
    case Expr::Kind::Mul: {
      K acc = FT::one();
      for (size_t k = 0; k < e->args.size(); ++k) {
        K v = eval_expr<K>(e->args[k], env);
        if (e->negated[k]) acc /= v; else acc *= v;
      }
      return acc;
    }
    case Expr::Kind::Pow: {
      K base = eval_expr<K>(e->args[0], env);
      if (e->exp_den == 1) return pow_int(base, e->exp_num);
      unsigned q = static_cast<unsigned>(e->exp_den);
      K root = FT::root(base, q);
      if (!env.branches.empty()) {
        auto it = env.branches.find({e->args[0]->str(), q});
        if (it != env.branches.end() && it->second != 0)
          root = root * pow_int(FT::root_of_unity(q), static_cast<long>(it->second));
      }
      return pow_int(root, e->exp_num);
    }
  }
  throw ParseError("unreachable expression kind");
}

template Cx eval_expr<Cx>(const ExprPtr&, const EvalEnv<Cx>&);
template Rational eval_expr<Rational>(const ExprPtr&, const EvalEnv<Rational>&);

}  // namespace evo3
