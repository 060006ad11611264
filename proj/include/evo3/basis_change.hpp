// Natural-basis changes: P is valid iff det(P) != 0 and M (P*P) = 0, and then
// the structure matrix transforms as P^-1 M P^(2).
#ifndef EVO3_BASIS_CHANGE_HPP
#define EVO3_BASIS_CHANGE_HPP

#include <stdexcept>

#include "evo3/evolution.hpp"

namespace evo3 {

struct NotANaturalChange : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Entrywise square P^(2).
template <class K>
Mat3<K> entrywise_square(const Mat3<K>& p) {
  Mat3<K> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = p(i, j) * p(i, j);
  return out;
}

template <class K>
K det3(const Mat3<K>& p) {
  return p(0, 0) * (p(1, 1) * p(2, 2) - p(1, 2) * p(2, 1)) -
         p(0, 1) * (p(1, 0) * p(2, 2) - p(1, 2) * p(2, 0)) +
         p(0, 2) * (p(1, 0) * p(2, 1) - p(1, 1) * p(2, 0));
}

/// 3x3 inverse by adjugate over the field (exact for the rational backend).
template <class K>
Mat3<K> inverse3(const Mat3<K>& p) {
  K d = det3(p);
  if (field_traits<K>::is_zero(d)) throw std::domain_error("inverse3: singular");
  Mat3<K> adj;
  adj(0, 0) = p(1, 1) * p(2, 2) - p(1, 2) * p(2, 1);
  adj(0, 1) = p(0, 2) * p(2, 1) - p(0, 1) * p(2, 2);
  adj(0, 2) = p(0, 1) * p(1, 2) - p(0, 2) * p(1, 1);
  adj(1, 0) = p(1, 2) * p(2, 0) - p(1, 0) * p(2, 2);
  adj(1, 1) = p(0, 0) * p(2, 2) - p(0, 2) * p(2, 0);
  adj(1, 2) = p(0, 2) * p(1, 0) - p(0, 0) * p(1, 2);
  adj(2, 0) = p(1, 0) * p(2, 1) - p(1, 1) * p(2, 0);
  adj(2, 1) = p(0, 1) * p(2, 0) - p(0, 0) * p(2, 1);
  adj(2, 2) = p(0, 0) * p(1, 1) - p(0, 1) * p(1, 0);
  Mat3<K> out;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) out(i, j) = adj(i, j) / d;
  return out;
}

/// P*P: n x n(n-1)/2 matrix with columns p_{ki}p_{kj}, pairs (i,j) with i<j in
/// lexicographic order ((1,2),(1,3),(2,3) for n=3).
template <class K>
MatX<K> star_product(const Mat3<K>& p) {
  MatX<K> out(3, 3);
  int c = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j, ++c)
      for (int k = 0; k < 3; ++k) out(k, c) = p(k, i) * p(k, j);
  return out;
}

namespace detail {

// Tolerance-aware zero test for sum_k m(r,k) p(k,i) p(k,j): scale by the
// largest term magnitude to survive cancellation on the complex backend.
template <class K>
bool star_row_is_zero(const Mat3<K>& m, const Mat3<K>& p, int r, int i, int j) {
  using FT = field_traits<K>;
  K acc = FT::zero();
  double scale = 1.0;
  for (int k = 0; k < 3; ++k) {
    K term = m(r, k) * (p(k, i) * p(k, j));
    scale = std::max(scale, FT::abs(term));
    acc += term;
  }
  if constexpr (FT::exact) {
    return FT::is_zero(acc);
  } else {
    return FT::abs(acc) <= complex_tolerance() * scale;
  }
}

}  // namespace detail

/// Theorem criterion: det(P) != 0 and M (P*P) = 0. A singular P yields false.
template <class K>
bool is_natural_change(const Mat3<K>& m, const Mat3<K>& p) {
  if (field_traits<K>::is_zero(det3(p))) return false;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      for (int r = 0; r < 3; ++r)
        if (!detail::star_row_is_zero(m, p, r, i, j)) return false;
  return true;
}

/// M_{B'} = P^-1 M P^(2). Throws NotANaturalChange when P fails the
/// naturality criterion unless force is set (diagnostics only).
template <class K>
Mat3<K> transform(const Mat3<K>& m, const Mat3<K>& p, bool force = false) {
  if (!force && !is_natural_change(m, p))
    throw NotANaturalChange("transform: P is not a natural-basis change for M");
  return inverse3(p) * m * entrywise_square(p);
}

}  // namespace evo3

#endif  // EVO3_BASIS_CHANGE_HPP
