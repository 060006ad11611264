// The group of invertible monomial 3x3 matrices (S3 x (K*)^3) and its action
// P.M = P^-1 M P^(2) on structure matrices, with closed-form permutation and
// scaling actions.
#ifndef EVO3_GROUP_ACTION_HPP
#define EVO3_GROUP_ACTION_HPP

#include <array>
#include <stdexcept>

#include "evo3/basis_change.hpp"

namespace evo3 {

struct ZeroScalar : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Permutation of {1,2,3}; image(i) is 1-based.
struct Perm {
  std::array<int, 3> map{1, 2, 3};

  int operator()(int i) const { return map[i - 1]; }
  static Perm identity() { return {}; }
  bool is_identity() const { return map == std::array<int, 3>{1, 2, 3}; }

  Perm inverse() const {
    Perm p;
    for (int i = 1; i <= 3; ++i) p.map[map[i - 1] - 1] = i;
    return p;
  }
  /// (a*b)(i) = a(b(i))
  friend Perm operator*(const Perm& a, const Perm& b) {
    Perm p;
    for (int i = 1; i <= 3; ++i) p.map[i - 1] = a(b(i));
    return p;
  }
  friend bool operator==(const Perm&, const Perm&) = default;
};

inline const std::array<Perm, 6>& all_perms() {
  static const std::array<Perm, 6> ps = {
      Perm{{1, 2, 3}}, Perm{{2, 1, 3}}, Perm{{3, 2, 1}},
      Perm{{1, 3, 2}}, Perm{{2, 3, 1}}, Perm{{3, 1, 2}}};
  return ps;
}

/// Entry (i,j) of sigma.M is M(sigma(i), sigma(j)).
template <class K>
Mat3<K> act_permutation(const Perm& s, const Mat3<K>& m) {
  Mat3<K> out;
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j) out(i - 1, j - 1) = m(s(i) - 1, s(j) - 1);
  return out;
}

/// Matrix P with transform(M, P) == act_permutation(sigma, M): column j has
/// its 1 in row sigma(j).
template <class K>
Mat3<K> perm_matrix(const Perm& s) {
  Mat3<K> p = Mat3<K>::Constant(field_traits<K>::zero());
  for (int j = 1; j <= 3; ++j) p(s(j) - 1, j - 1) = field_traits<K>::one();
  return p;
}

/// Diagonal action of (a,b,c): row 1 becomes (a w11, b^2/a w12, c^2/a w13), etc.
template <class K>
Mat3<K> act_diagonal(const std::array<K, 3>& d, const Mat3<K>& m) {
  using FT = field_traits<K>;
  for (const K& x : d)
    if (FT::is_zero(x)) throw ZeroScalar("act_diagonal: zero scalar");
  const K &a = d[0], &b = d[1], &c = d[2];
  Mat3<K> out;
  out(0, 0) = a * m(0, 0);
  out(0, 1) = b * b / a * m(0, 1);
  out(0, 2) = c * c / a * m(0, 2);
  out(1, 0) = a * a / b * m(1, 0);
  out(1, 1) = b * m(1, 1);
  out(1, 2) = c * c / b * m(1, 2);
  out(2, 0) = a * a / c * m(2, 0);
  out(2, 1) = b * b / c * m(2, 1);
  out(2, 2) = c * m(2, 2);
  return out;
}

template <class K>
struct GroupElement {
  Perm sigma;
  std::array<K, 3> scalars{field_traits<K>::one(), field_traits<K>::one(),
                           field_traits<K>::one()};

  static GroupElement identity() { return {}; }

  /// Matrix form diag(scalars) * perm_matrix(sigma): one nonzero per row and
  /// column.
  Mat3<K> matrix() const {
    Mat3<K> d = Mat3<K>::Constant(field_traits<K>::zero());
    for (int i = 0; i < 3; ++i) d(i, i) = scalars[i];
    return d * perm_matrix<K>(sigma);
  }
};

/// Rebuild a group element from a monomial matrix; throws if the matrix is
/// not monomial/invertible.
template <class K>
GroupElement<K> group_element_from_matrix(const Mat3<K>& p) {
  using FT = field_traits<K>;
  GroupElement<K> g;
  std::array<bool, 3> used{false, false, false};
  for (int j = 0; j < 3; ++j) {
    int row = -1;
    for (int i = 0; i < 3; ++i) {
      if (!FT::is_zero(p(i, j))) {
        if (row >= 0) throw std::invalid_argument("not a monomial matrix");
        row = i;
      }
    }
    if (row < 0 || used[row]) throw std::invalid_argument("not a monomial matrix");
    used[row] = true;
    g.sigma.map[j] = row + 1;
    g.scalars[row] = p(row, j);
  }
  return g;
}

/// Scale first, then relabel; agrees with transform(M, g.matrix()).
template <class K>
Mat3<K> act(const GroupElement<K>& g, const Mat3<K>& m) {
  return act_permutation(g.sigma, act_diagonal(g.scalars, m));
}

/// act(compose(g,h), M) == act(g, act(h, M)); matrix(compose) = matrix(h)*matrix(g).
template <class K>
GroupElement<K> compose(const GroupElement<K>& g, const GroupElement<K>& h) {
  return group_element_from_matrix<K>(Mat3<K>(h.matrix() * g.matrix()));
}

template <class K>
GroupElement<K> inverse(const GroupElement<K>& g) {
  return group_element_from_matrix<K>(inverse3(g.matrix()));
}

}  // namespace evo3

#endif  // EVO3_GROUP_ACTION_HPP
