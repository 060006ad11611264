// Solving the multiplicative systems behind the diagonal action: given two
// matrices with one common zero pattern, find all (a,b,c) with
// act_diagonal((a,b,c), N) = T, and monomial witnesses between structure
// matrices.
#ifndef EVO3_SOLVE_MONOMIAL_HPP
#define EVO3_SOLVE_MONOMIAL_HPP

#include <array>
#include <optional>
#include <vector>

#include "evo3/group_action.hpp"

namespace evo3 {

namespace detail {

// exponent of (a,b,c) multiplying entry (i,j) under the diagonal action
inline std::array<long, 3> diag_exponent(int i, int j) {
  // (1,1):a (1,2):b^2/a (1,3):c^2/a / (2,1):a^2/b ... (3,3):c
  static const std::array<long, 3> table[3][3] = {
      {{1, 0, 0}, {-1, 2, 0}, {-1, 0, 2}},
      {{2, -1, 0}, {0, 1, 0}, {0, -1, 2}},
      {{2, 0, -1}, {0, 2, -1}, {0, 0, 1}},
  };
  return table[i][j];
}

template <class K>
std::vector<K> unity_multipliers(unsigned n) {
  using FT = field_traits<K>;
  std::vector<K> out;
  if constexpr (FT::exact) {
    out.push_back(FT::one());
    if (n % 2 == 0) out.push_back(FT::from_int(-1));
  } else {
    K w = FT::root_of_unity(n);
    K acc = FT::one();
    for (unsigned t = 0; t < n; ++t) {
      out.push_back(acc);
      acc = acc * w;
    }
  }
  return out;
}

template <class K>
K pow_signed(const K& x, long e) {
  return pow_int(x, e);
}

}  // namespace detail

template <class K>
std::array<bool, 9> zero_pattern(const Mat3<K>& m) {
  std::array<bool, 9> p{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[3 * i + j] = field_traits<K>::is_zero(m(i, j));
  return p;
}

namespace detail {

// one elimination/back-substitution pass with the variables processed in the
// given column order
template <class K>
void solve_mult_system(std::vector<std::array<long, 3>> rows, std::vector<K> rhs,
                       const std::array<int, 3>& order,
                       std::vector<std::array<K, 3>>& out, int& root_failures) {
  using FT = field_traits<K>;
  const int m = static_cast<int>(rows.size());

  // integer Gaussian elimination with gcd steps; rhs transforms multiplicatively
  int r0 = 0;
  std::vector<std::pair<int, int>> pivots;
  for (int col : order) {
    for (;;) {
      int best = -1;
      for (int r = r0; r < m; ++r)
        if (rows[r][col] != 0 &&
            (best < 0 || std::abs(rows[r][col]) < std::abs(rows[best][col])))
          best = r;
      if (best < 0) break;
      std::swap(rows[r0], rows[best]);
      std::swap(rhs[r0], rhs[best]);
      bool done = true;
      for (int r = r0 + 1; r < m; ++r) {
        if (rows[r][col] == 0) continue;
        long q = rows[r][col] / rows[r0][col];
        if (q != 0) {
          for (int c = 0; c < 3; ++c) rows[r][c] -= q * rows[r0][c];
          rhs[r] = rhs[r] * detail::pow_signed(rhs[r0], -q);
        }
        if (rows[r][col] != 0) done = false;
      }
      if (done) break;
    }
    if (r0 < m && rows[r0][col] != 0) {
      pivots.emplace_back(r0, col);
      ++r0;
    }
  }
  // consistency rows with zero exponents must have rhs == 1; on the floating
  // backend the test is loosened (amplified rounding), final verification of
  // every candidate decides
  for (int r = r0; r < m; ++r) {
    if (rows[r][0] == 0 && rows[r][1] == 0 && rows[r][2] == 0) {
      if constexpr (FT::exact) {
        if (!FT::eq(rhs[r], FT::one())) return;
      } else {
        if (FT::abs(rhs[r] - FT::one()) > 1e-4) return;
      }
    }
  }

  // back substitution, enumerating the finitely many root choices; columns
  // without a pivot are free and fixed to 1
  std::vector<std::array<std::optional<K>, 3>> partials(1);
  for (int col = 0; col < 3; ++col) {
    bool pivoted = false;
    for (auto& [r, c] : pivots)
      if (c == col) pivoted = true;
    if (!pivoted) partials[0][col] = FT::one();
  }
  for (auto it = pivots.rbegin(); it != pivots.rend(); ++it) {
    auto [r, col] = *it;
    std::vector<std::array<std::optional<K>, 3>> next;
    for (auto& sol : partials) {
      K v = rhs[r];
      bool ok = true;
      for (int c = 0; c < 3; ++c) {
        if (c == col || rows[r][c] == 0) continue;
        if (!sol[c]) { ok = false; break; }
        v = v * detail::pow_signed(*sol[c], -rows[r][c]);
      }
      if (!ok) continue;
      long k = rows[r][col];
      unsigned deg = static_cast<unsigned>(std::abs(k));
      K base;
      try {
        base = FT::root(k > 0 ? v : FT::inv(v), deg);
      } catch (const RootUnavailable&) {
        ++root_failures;  // this branch has no solution in the field
        continue;
      }
      for (const K& mult : detail::unity_multipliers<K>(deg)) {
        auto s2 = sol;
        s2[col] = base * mult;
        next.push_back(s2);
      }
    }
    partials = std::move(next);
  }

  for (auto& sol : partials)
    out.push_back({sol[0].value_or(FT::one()), sol[1].value_or(FT::one()),
                   sol[2].value_or(FT::one())});
}

}  // namespace detail

/// All diagonal scalings carrying N to T (same zero pattern required).
/// Solved by integer elimination on the exponent lattice; roots of unity are
/// enumerated, every variable ordering is tried (pivot order decides which
/// roots are taken, which matters for exact solvability and for the set of
/// representatives found), and every candidate is verified.
template <class K>
std::vector<std::array<K, 3>> solve_diagonal_transport(
    const Mat3<K>& n, const Mat3<K>& t, int* root_failures = nullptr) {
  using FT = field_traits<K>;
  std::vector<std::array<K, 3>> result;
  if (zero_pattern(n) != zero_pattern(t)) return result;

  std::vector<std::array<long, 3>> rows;
  std::vector<K> rhs;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      if (FT::is_zero(n(i, j))) continue;
      rows.push_back(detail::diag_exponent(i, j));
      rhs.push_back(t(i, j) / n(i, j));
    }

  static const std::array<std::array<int, 3>, 6> orders = {
      {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  std::vector<std::array<K, 3>> raw;
  int rf = 0;
  for (const auto& order : orders) detail::solve_mult_system<K>(rows, rhs, order, raw, rf);
  if (root_failures) *root_failures += rf;

  for (auto& d : raw) {
    bool bad = false;
    for (const K& x : d)
      if (FT::is_zero(x)) { bad = true; break; }
    if (bad) continue;
    bool dup = false;
    for (auto& e : result)
      if (FT::eq(d[0], e[0]) && FT::eq(d[1], e[1]) && FT::eq(d[2], e[2])) dup = true;
    if (dup) continue;
    if (mat_eq<K, 3, 3>(act_diagonal(d, n), t)) result.push_back(d);
  }
  return result;
}

/// All monomial witnesses g with act(g, M1) = M2, in a deterministic order
/// (permutations enumerated in the fixed all_perms() order).
template <class K>
std::vector<GroupElement<K>> find_witnesses_group(const Mat3<K>& m1,
                                                  const Mat3<K>& m2) {
  std::vector<GroupElement<K>> out;
  for (const Perm& s : all_perms()) {
    // act(g, M) = act_permutation(sigma, act_diagonal(d, M)); solve for d on
    // N := act_permutation(sigma^-1, M2) ... i.e. act_diag(d, M1) = N.
    Mat3<K> n = act_permutation(s.inverse(), m2);
    for (auto& d : solve_diagonal_transport<K>(m1, n)) {
      GroupElement<K> g{s, d};
      if (mat_eq<K, 3, 3>(act(g, m1), m2)) out.push_back(g);
    }
  }
  return out;
}

template <class K>
std::optional<GroupElement<K>> find_witness_group(const Mat3<K>& m1,
                                                  const Mat3<K>& m2) {
  for (const Perm& s : all_perms()) {
    Mat3<K> n = act_permutation(s.inverse(), m2);
    for (auto& d : solve_diagonal_transport<K>(m1, n)) {
      GroupElement<K> g{s, d};
      if (mat_eq<K, 3, 3>(act(g, m1), m2)) return g;
    }
  }
  return std::nullopt;
}

}  // namespace evo3

#endif  // EVO3_SOLVE_MONOMIAL_HPP
