// Evolution algebras through their structure matrices: products of elements,
// rank/annihilator invariants, Property (2LI).
#ifndef EVO3_EVOLUTION_HPP
#define EVO3_EVOLUTION_HPP

#include <optional>
#include <stdexcept>

#include "evo3/matrix.hpp"

namespace evo3 {

struct DimensionMismatch : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct IndexOutOfRange : std::out_of_range {
  using std::out_of_range::out_of_range;
};

// The structure matrix M_B holds the coordinates of e_i^2 in column i.
// Any square matrix is a valid structure matrix.

/// xi_B(xy) = M (x .B y) where .B is the componentwise product.
template <class K>
VecX<K> multiply(const VecX<K>& x, const VecX<K>& y, const MatX<K>& m) {
  if (x.size() != y.size() || x.size() != m.cols() || m.rows() != m.cols())
    throw DimensionMismatch("multiply: dimensions disagree");
  VecX<K> h(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) h(i) = x(i) * y(i);
  return m * h;
}

template <class K>
Vec3<K> multiply(const Vec3<K>& x, const Vec3<K>& y, const Mat3<K>& m) {
  Vec3<K> h;
  for (int i = 0; i < 3; ++i) h(i) = x(i) * y(i);
  return m * h;
}

/// Matrix of the left multiplication operator by e_i (1-based index):
/// all columns zero except column i, which is column i of M.
template <class K>
MatX<K> left_mult_matrix(const MatX<K>& m, int i) {
  if (i < 1 || i > m.cols()) throw IndexOutOfRange("left_mult_matrix: bad index");
  MatX<K> out = MatX<K>::Constant(m.rows(), m.cols(), field_traits<K>::zero());
  out.col(i - 1) = m.col(i - 1);
  return out;
}

/// Rank by Gaussian elimination with the backend's zero test; the complex
/// backend pivots on maximum magnitude.
template <class K>
int rank(MatX<K> a) {
  using FT = field_traits<K>;
  const Eigen::Index rows = a.rows(), cols = a.cols();
  int r = 0;
  for (Eigen::Index col = 0; col < cols && r < rows; ++col) {
    Eigen::Index piv = -1;
    double best = 0.0;
    for (Eigen::Index i = r; i < rows; ++i) {
      if (!FT::is_zero(a(i, col))) {
        double mag = FT::abs(a(i, col));
        if (piv < 0 || mag > best) { piv = i; best = mag; }
      }
    }
    if (piv < 0) continue;
    a.row(piv).swap(a.row(r));
    for (Eigen::Index i = r + 1; i < rows; ++i) {
      if (FT::is_zero(a(i, col))) continue;
      K f = a(i, col) / a(r, col);
      for (Eigen::Index j = col; j < cols; ++j) a(i, j) -= f * a(r, j);
    }
    ++r;
  }
  return r;
}

template <class K>
int rank3(const Mat3<K>& m) {
  MatX<K> a = m;
  return rank<K>(a);
}

/// dim A^2 = rank(M): A^2 is spanned by the columns e_i^2.
template <class K>
int dim_square(const Mat3<K>& m) { return rank3(m); }

/// dim ann(A) = number of zero columns (basis vectors with e_i^2 = 0).
template <class K>
int annihilator_dim(const Mat3<K>& m) {
  int n = 0;
  for (int j = 0; j < 3; ++j) {
    bool zero = true;
    for (int i = 0; i < 3; ++i)
      if (!field_traits<K>::is_zero(m(i, j))) { zero = false; break; }
    if (zero) ++n;
  }
  return n;
}

struct ZeroProfile {
  int zero_count = 0;
  int diag_zero_count = 0;
  int rank = 0;
  friend bool operator==(const ZeroProfile&, const ZeroProfile&) = default;
};

template <class K>
ZeroProfile zero_profile(const Mat3<K>& m) {
  ZeroProfile p;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      if (field_traits<K>::is_zero(m(i, j))) {
        ++p.zero_count;
        if (i == j) ++p.diag_zero_count;
      }
  p.rank = rank3(m);
  return p;
}

/// Property (2LI) at the given basis: rank 2 and every pair of columns
/// linearly independent.
template <class K>
bool property_2li(const Mat3<K>& m) {
  if (rank3(m) != 2) return false;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b) {
      MatX<K> pair(3, 2);
      pair.col(0) = m.col(a);
      pair.col(1) = m.col(b);
      if (rank<K>(pair) != 2) return false;
    }
  return true;
}

struct InvariantProfile {
  int dim_square = 0;
  int ann_dim = 0;
  int zero_count = 0;
  int diag_zero_count = 0;
  int rank = 0;
  std::optional<bool> extension_property;  // defined for dim A^2 = 1
  std::optional<bool> property_2li;        // defined for dim A^2 = 2
  std::optional<bool> pd2ei;               // defined for dim A^2 = 1
  friend bool operator==(const InvariantProfile&, const InvariantProfile&) = default;
};

}  // namespace evo3

#endif  // EVO3_EVOLUTION_HPP
