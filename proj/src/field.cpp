#include "evo3/field.hpp"

#include <numbers>
#include <sstream>

namespace evo3 {

namespace {

// exact n-th root of a positive integer, or failure
bool exact_root_z(const mpz_class& x, unsigned n, mpz_class& out) {
  if (x == 0) { out = 0; return true; }
  mpz_class r;
  int exactp = mpz_root(r.get_mpz_t(), x.get_mpz_t(), n);
  if (exactp == 0) return false;
  out = r;
  return true;
}

}  // namespace

Rational Rational::nth_root(unsigned n) const {
  if (n == 0) throw std::domain_error("0th root");
  if (n == 1) return *this;
  const mpq_class& q = v_;
  if (q == 0) return Rational(0);
  bool neg = q < 0;
  if (neg && n % 2 == 0)
    throw RootUnavailable("even root of a negative rational");
  mpz_class num = abs(q.get_num());
  mpz_class den = q.get_den();
  mpz_class rn, rd;
  if (!exact_root_z(num, n, rn) || !exact_root_z(den, n, rd))
    throw RootUnavailable("rational has no exact root of order " + std::to_string(n));
  mpq_class r(rn, rd);
  if (neg) r = -r;
  return Rational(r);
}

Rational pow_int(const Rational& x, long e) {
  if (e == 0) return Rational(1);
  bool inv = e < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -e : e);
  mpz_class num, den;
  mpz_pow_ui(num.get_mpz_t(), x.raw().get_num().get_mpz_t(), k);
  mpz_pow_ui(den.get_mpz_t(), x.raw().get_den().get_mpz_t(), k);
  mpq_class r(num, den);
  r.canonicalize();
  Rational out{r};
  return inv ? Rational(1) / out : out;
}

Cx pow_int(const Cx& x, long e) {
  if (e == 0) return Cx(1.0);
  bool inv = e < 0;
  unsigned long k = static_cast<unsigned long>(inv ? -e : e);
  Cx acc(1.0), base = x;
  while (k) {
    if (k & 1) acc *= base;
    base *= base;
    k >>= 1;
  }
  return inv ? Cx(1.0) / acc : acc;
}

Cx nth_root(const Cx& x, unsigned n) {
  if (n == 0) throw std::domain_error("0th root");
  if (n == 1) return x;
  double r = std::abs(x);
  if (r == 0.0) return Cx(0.0);
  double a = std::arg(x);
  if (a < 0) a += 2.0 * std::numbers::pi;  // principal: argument in [0, 2*pi/n)
  return std::polar(std::pow(r, 1.0 / static_cast<double>(n)),
                    a / static_cast<double>(n));
}

Cx field_traits<Cx>::root_of_unity(unsigned n) {
  return std::polar(1.0, 2.0 * std::numbers::pi / static_cast<double>(n));
}

std::string to_string(const Cx& v) {
  // components below the comparison tolerance are noise, not data
  double scale = complex_tolerance() * std::max(1.0, std::abs(v));
  double re = std::abs(v.real()) <= scale ? 0.0 : v.real();
  double im = std::abs(v.imag()) <= scale ? 0.0 : v.imag();
  std::ostringstream os;
  os.precision(17);
  if (im == 0.0) {
    os << re;
  } else if (re == 0.0) {
    os << im << "i";
  } else {
    os << re << (im < 0 ? "" : "+") << im << "i";
  }
  return os.str();
}

std::string to_string(const Rational& v) { return v.str(); }

}  // namespace evo3
