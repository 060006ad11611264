// Dense matrix/vector aliases over a field scalar, plus the Eigen glue for the
// exact rational scalar.
#ifndef EVO3_MATRIX_HPP
#define EVO3_MATRIX_HPP

#include <Eigen/Core>

#include "evo3/field.hpp"

namespace Eigen {

template <>
struct NumTraits<evo3::Rational> {
  using Real = evo3::Rational;
  using NonInteger = evo3::Rational;
  using Literal = evo3::Rational;
  using Nested = evo3::Rational;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 8,
    AddCost = 30,
    MulCost = 30,
  };
  static inline Real epsilon() { return evo3::Rational(0); }
  static inline Real dummy_precision() { return evo3::Rational(0); }
  static inline int digits10() { return 0; }
};

}  // namespace Eigen

namespace evo3 {

template <class K>
using Mat3 = Eigen::Matrix<K, 3, 3>;
template <class K>
using Vec3 = Eigen::Matrix<K, 3, 1>;
template <class K>
using MatX = Eigen::Matrix<K, Eigen::Dynamic, Eigen::Dynamic>;
template <class K>
using VecX = Eigen::Matrix<K, Eigen::Dynamic, 1>;

template <class K>
bool mat_eq(const MatX<K>& a, const MatX<K>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      if (!field_traits<K>::eq(a(i, j), b(i, j))) return false;
  return true;
}

template <class K, int R, int C>
bool mat_eq(const Eigen::Matrix<K, R, C>& a, const Eigen::Matrix<K, R, C>& b) {
  for (int i = 0; i < R; ++i)
    for (int j = 0; j < C; ++j)
      if (!field_traits<K>::eq(a(i, j), b(i, j))) return false;
  return true;
}

}  // namespace evo3

#endif  // EVO3_MATRIX_HPP
