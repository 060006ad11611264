// Ground-field abstraction: a complex floating backend and an exact rational
// backend, both closed (where possible) under 2nd/3rd/7th roots.
#ifndef EVO3_FIELD_HPP
#define EVO3_FIELD_HPP

#include <complex>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <atomic>

#include <gmpxx.h>

namespace evo3 {

using Cx = std::complex<double>;

struct RootUnavailable : std::runtime_error {
  explicit RootUnavailable(const std::string& what) : std::runtime_error(what) {}
};
struct BackendMismatch : std::runtime_error {
  explicit BackendMismatch(const std::string& what) : std::runtime_error(what) {}
};

/// Relative tolerance used by all approximate comparisons on the complex
/// backend. Set once at startup (e.g. from the CLI --tol flag).
inline std::atomic<double>& complex_tolerance_storage() {
  static std::atomic<double> tol{1e-9};
  return tol;
}
inline double complex_tolerance() { return complex_tolerance_storage().load(); }
inline void set_complex_tolerance(double t) { complex_tolerance_storage().store(t); }

// ---------------------------------------------------------------------------
// Exact rational scalar backed by GMP.

class Rational {
 public:
  Rational() : v_(0) {}
  Rational(int n) : v_(n) {}                     // NOLINT(google-explicit-constructor)
  Rational(long n) : v_(static_cast<long>(n)) {} // NOLINT
  Rational(long n, long d) : v_(n, d) { v_.canonicalize(); }
  explicit Rational(const mpq_class& q) : v_(q) { v_.canonicalize(); }
  explicit Rational(const std::string& s) : v_(s) { v_.canonicalize(); }

  const mpq_class& raw() const { return v_; }

  Rational operator-() const { return Rational(mpq_class(-v_)); }
  Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
  Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
  Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
  Rational& operator/=(const Rational& o) {
    if (o.v_ == 0) throw std::domain_error("rational division by zero");
    v_ /= o.v_;
    return *this;
  }

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
  friend bool operator==(const Rational& a, const Rational& b) { return a.v_ == b.v_; }
  friend bool operator!=(const Rational& a, const Rational& b) { return a.v_ != b.v_; }
  friend bool operator<(const Rational& a, const Rational& b) { return a.v_ < b.v_; }
  friend bool operator<=(const Rational& a, const Rational& b) { return a.v_ <= b.v_; }
  friend bool operator>(const Rational& a, const Rational& b) { return a.v_ > b.v_; }
  friend bool operator>=(const Rational& a, const Rational& b) { return a.v_ >= b.v_; }

  double to_double() const { return v_.get_d(); }
  std::string str() const { return v_.get_str(); }

  /// Exact n-th root. Throws RootUnavailable when none exists in Q.
  Rational nth_root(unsigned n) const;

  bool is_zero() const { return v_ == 0; }
  int sign() const { return sgn(v_); }

 private:
  mpq_class v_;
};

Rational pow_int(const Rational& x, long e);
Cx pow_int(const Cx& x, long e);

/// Principal n-th root: the root whose argument lies in [0, 2*pi/n).
Cx nth_root(const Cx& x, unsigned n);
inline Rational nth_root(const Rational& x, unsigned n) { return x.nth_root(n); }

inline bool approx_eq(const Cx& a, const Cx& b) {
  const double tol = complex_tolerance();
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}
inline bool approx_eq(const Rational& a, const Rational& b) { return a == b; }

inline bool is_zero(const Cx& a) { return approx_eq(a, Cx(0.0)); }
inline bool is_zero(const Rational& a) { return a.is_zero(); }

// Total order for canonical-representative selection. For complex values this
// is lexicographic on (re, im); it is not compatible with arithmetic, only a
// deterministic tie-break.
inline bool value_less(const Rational& a, const Rational& b) { return a < b; }
inline bool value_less(const Cx& a, const Cx& b) {
  if (approx_eq(a, b)) return false;
  if (std::abs(a.real() - b.real()) >
      complex_tolerance() * std::max({1.0, std::abs(a), std::abs(b)}))
    return a.real() < b.real();
  return a.imag() < b.imag();
}

template <class K>
struct field_traits;

template <>
struct field_traits<Cx> {
  static constexpr bool exact = false;
  static Cx zero() { return Cx(0.0); }
  static Cx one() { return Cx(1.0); }
  static Cx from_int(long n) { return Cx(static_cast<double>(n)); }
  static bool eq(const Cx& a, const Cx& b) { return approx_eq(a, b); }
  static bool is_zero(const Cx& a) { return evo3::is_zero(a); }
  static Cx inv(const Cx& a) {
    if (is_zero(a)) throw std::domain_error("inverse of ~0 complex value");
    return Cx(1.0) / a;
  }
  static Cx root(const Cx& a, unsigned n) { return nth_root(a, n); }
  static bool less(const Cx& a, const Cx& b) { return value_less(a, b); }
  static double abs(const Cx& a) { return std::abs(a); }
  /// phi7 / zeta3 / i exist only on this backend.
  static Cx imaginary_unit() { return Cx(0.0, 1.0); }
  static Cx root_of_unity(unsigned n);  // e^{2*pi*i/n}
};

template <>
struct field_traits<Rational> {
  static constexpr bool exact = true;
  static Rational zero() { return Rational(0); }
  static Rational one() { return Rational(1); }
  static Rational from_int(long n) { return Rational(n); }
  static bool eq(const Rational& a, const Rational& b) { return a == b; }
  static bool is_zero(const Rational& a) { return a.is_zero(); }
  static Rational inv(const Rational& a) { return Rational(1) / a; }
  static Rational root(const Rational& a, unsigned n) { return a.nth_root(n); }
  static bool less(const Rational& a, const Rational& b) { return a < b; }
  static double abs(const Rational& a) { return std::fabs(a.to_double()); }
  static Rational imaginary_unit() {
    throw RootUnavailable("sqrt(-1) does not exist in the rational field");
  }
  static Rational root_of_unity(unsigned n) {
    if (n == 1) return Rational(1);
    if (n == 2) return Rational(-1);
    throw RootUnavailable("no nontrivial roots of unity in the rational field");
  }
};

std::string to_string(const Cx& v);
std::string to_string(const Rational& v);

}  // namespace evo3

#endif  // EVO3_FIELD_HPP
