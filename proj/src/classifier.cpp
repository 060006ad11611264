#include "evo3/classifier.hpp"

#include "evo3/newton.hpp"
#include "evo3/solve_monomial.hpp"

#include <algorithm>

namespace evo3 {

namespace {

template <class K>
using FT = field_traits<K>;

template <class K>
Mat3<K> zero_mat() {
  return Mat3<K>::Constant(field_traits<K>::zero());
}

template <class K>
Mat3<K> identity_mat() {
  Mat3<K> m = zero_mat<K>();
  for (int i = 0; i < 3; ++i) m(i, i) = field_traits<K>::one();
  return m;
}

// running (matrix, accumulated witness) pair; steps compose on the right
template <class K>
struct Pipeline {
  Mat3<K> m;
  Mat3<K> w = identity_mat<K>();

  void step(const Mat3<K>& p) {
    m = transform(m, p, /*force=*/true);
    w = Mat3<K>(w * p);
  }
  void step_perm(const Perm& s) { step(perm_matrix<K>(s)); }
};

template <class K>
bool tuple_less(const std::vector<std::pair<std::string, K>>& a,
                const std::vector<std::pair<std::string, K>>& b) {
  for (size_t k = 0; k < std::min(a.size(), b.size()); ++k) {
    if (field_traits<K>::less(a[k].second, b[k].second)) return true;
    if (field_traits<K>::less(b[k].second, a[k].second)) return false;
  }
  return a.size() < b.size();
}

template <class K>
std::vector<std::pair<std::string, K>> sorted_params(const std::map<std::string, K>& m) {
  std::vector<std::pair<std::string, K>> out(m.begin(), m.end());
  return out;  // std::map iterates in key order
}

// candidate canonical forms, pooled and minimized
template <class K>
struct CandidatePool {
  std::optional<CanonicalType<K>> best;
  Mat3<K> best_witness = identity_mat<K>();
  int root_failures = 0;

  void offer(const Family& f, const Mat3<K>& canon, const Mat3<K>& witness,
             const std::map<std::string, K>& params, bool near_boundary) {
    CanonicalType<K> t;
    t.dim_class = f.dim_class;
    auto dot = f.id.find('.');
    t.table = f.id.substr(0, dot);
    t.row = std::stoi(f.id.substr(dot + 1));
    t.params = sorted_params(params);
    t.canonical_matrix = canon;
    t.near_branch_boundary = near_boundary;
    if (!best || key_less(t, *best)) {
      best = std::move(t);
      best_witness = witness;
    }
  }

  static bool key_less(const CanonicalType<K>& a, const CanonicalType<K>& b) {
    if (a.table != b.table) return table_index(a.table) < table_index(b.table);
    if (a.row != b.row) return a.row < b.row;
    return tuple_less(a.params, b.params);
  }
  static int table_index(const std::string& t) { return std::stoi(t.substr(1)); }
};

// families with a given dim class, grouped once
const std::vector<const Family*>& families_of_class(int dim_class) {
  static const auto groups = [] {
    std::array<std::vector<const Family*>, 3> g;
    for (const auto& f : families()) g[f.dim_class - 1].push_back(&f);
    return g;
  }();
  return groups[dim_class - 1];
}

template <class K>
std::array<std::array<bool, 3>, 3> nonzero_pattern(const Mat3<K>& m) {
  std::array<std::array<bool, 3>, 3> p{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) p[i][j] = !field_traits<K>::is_zero(m(i, j));
  return p;
}

template <class K>
struct DiagCandidate {
  const Family* fam;
  Mat3<K> canon;
  Mat3<K> witness;
  std::map<std::string, K> params;
};

// solve a diagonal (a,b,c) sending n's entries at the fixed positions of f to
// the fixed values; collects all verified family matches
template <class K>
void collect_diag_matches(std::vector<DiagCandidate<K>>& out, int& root_failures,
                          const Family& f, const Mat3<K>& n,
                          const Mat3<K>& witness_so_far) {
  // build a partial target matrix agreeing with n off the fixed positions
  Mat3<K> target = n;
  EvalEnv<K> env;
  for (const auto& [pos, expr] : f.fixed) {
    K v;
    try {
      v = eval_expr<K>(expr, env);
    } catch (const RootUnavailable&) {
      ++root_failures;
      return;
    }
    target(pos[0] - 1, pos[1] - 1) = v;
  }
  // multiplicative solve restricted to the fixed positions
  Mat3<K> nfixed = zero_mat<K>();
  Mat3<K> tfixed = zero_mat<K>();
  for (const auto& [pos, expr] : f.fixed) {
    nfixed(pos[0] - 1, pos[1] - 1) = n(pos[0] - 1, pos[1] - 1);
    tfixed(pos[0] - 1, pos[1] - 1) = target(pos[0] - 1, pos[1] - 1);
  }
  std::vector<std::array<K, 3>> sols = solve_diagonal_transport<K>(nfixed, tfixed, &root_failures);
  for (const auto& d : sols) {
    Mat3<K> c;
    try {
      c = act_diagonal(d, n);
    } catch (const std::exception&) {
      continue;
    }
    std::map<std::string, K> params;
    try {
      params = read_params<K>(f, c);
      Mat3<K> check = instantiate<K>(f, params);
      if (!mat_eq<K, 3, 3>(check, c)) continue;
    } catch (const std::exception&) {
      continue;
    }
    Mat3<K> dm = zero_mat<K>();
    for (int i = 0; i < 3; ++i) dm(i, i) = d[i];
    out.push_back({&f, c, Mat3<K>(witness_so_far * dm), params});
  }
}

template <class K>
std::vector<Mat3<K>> continuous_normalizers(const std::string& family,
                                            const std::map<std::string, K>& params);

// pool candidates; families with a continuous identification are first pushed
// onto their canonical slice (every reachable slice point pooled, raw
// candidates only as a fallback when no slice point is reachable)
template <class K>
void offer_candidates(CandidatePool<K>& pool,
                      const std::vector<DiagCandidate<K>>& cands) {
  for (const auto& cand : cands) {
    auto moves = continuous_normalizers<K>(cand.fam->id, cand.params);
    bool normalized = false;
    for (const auto& mv : moves) {
      Pipeline<K> t{cand.canon, cand.witness};
      try {
        t.step(mv);
      } catch (const std::exception&) {
        continue;
      }
      std::vector<DiagCandidate<K>> renorm;
      int rf = 0;
      collect_diag_matches(renorm, rf, *cand.fam, t.m, t.w);
      for (const auto& rc : renorm) {
        pool.offer(*rc.fam, rc.canon, rc.witness, rc.params, false);
        normalized = true;
      }
    }
    if (moves.empty() || !normalized)
      pool.offer(*cand.fam, cand.canon, cand.witness, cand.params, false);
  }
}

template <class K>
void offer_diag_matches(CandidatePool<K>& pool, const Family& f, const Mat3<K>& n,
                        const Mat3<K>& witness_so_far, bool /*near_boundary*/) {
  std::vector<DiagCandidate<K>> cands;
  collect_diag_matches(cands, pool.root_failures, f, n, witness_so_far);
  offer_candidates(pool, cands);
}

// the group-regime canonicalizer: dim 3 always, dim 2 when Property (2LI)
template <class K>
ClassificationResult<K> canonicalize_group_regime(const Mat3<K>& m, int dim_class) {
  CandidatePool<K> pool;
  for (const Perm& s : all_perms()) {
    Mat3<K> n = act_permutation(s, m);
    auto pat = nonzero_pattern(n);
    for (const Family* f : families_of_class(dim_class)) {
      if (f->pattern != pat) continue;
      offer_diag_matches(pool, *f, n, perm_matrix<K>(s), false);
    }
  }
  if (!pool.best) {
    if (pool.root_failures > 0)
      throw RootUnavailable("canonical form requires roots unavailable in this field");
    throw std::logic_error("no canonical family matched (unexpected)");
  }
  ClassificationResult<K> out;
  out.type = *pool.best;
  out.witness = pool.best_witness;
  return out;
}

// ---------------------------------------------------------------------------
// dim A^2 = 1: the constructive case tree

// facts per Table 1 row: (EP, ann, PD2EI)
const std::array<Dim1RowFacts, 7> kTable1Facts = {{
    {false, 0, true},   // [[1,-1,1],[1,-1,1],[0,0,0]]
    {false, 1, true},   // [[1,-1,0],[1,-1,0],[0,0,0]]
    {true, 0, false},   // [[1,1,1],0,0]
    {true, 1, false},   // [[1,0,1],0,0]
    {true, 2, false},   // [[1,0,0],0,0]
    {true, 1, true},    // [[0,1,1],0,0]
    {true, 2, true},    // [[0,0,1],0,0]
}};

template <class K>
Mat3<K> cols_matrix(const Vec3<K>& c1, const Vec3<K>& c2, const Vec3<K>& c3) {
  Mat3<K> p;
  p.col(0) = c1;
  p.col(1) = c2;
  p.col(2) = c3;
  return p;
}

template <class K>
Vec3<K> basis_vec(int i) {
  Vec3<K> v{field_traits<K>::zero(), field_traits<K>::zero(), field_traits<K>::zero()};
  v(i - 1) = field_traits<K>::one();
  return v;
}

template <class K>
Mat3<K> diag_mat(const K& a, const K& b, const K& c) {
  Mat3<K> d = zero_mat<K>();
  d(0, 0) = a;
  d(1, 1) = b;
  d(2, 2) = c;
  return d;
}

struct Dim1State {
  int terminal_row = 0;  // 1..7 once decided
};

// One pass of the proof's case tree; permутation reductions recurse (bounded).
template <class K>
void dim1_reduce(Pipeline<K>& pl, int depth = 0) {
  using FTK = field_traits<K>;
  const K one = FTK::one(), zero = FTK::zero();
  if (depth > 8) throw std::logic_error("dim1 reduction did not terminate");

  // move a nonzero column into position 1
  int j0 = -1;
  for (int j = 0; j < 3 && j0 < 0; ++j)
    for (int i = 0; i < 3; ++i)
      if (!FTK::is_zero(pl.m(i, j))) { j0 = j; break; }
  if (j0 < 0) throw std::logic_error("dim1_reduce on the zero matrix");
  if (j0 == 1) pl.step_perm(Perm{{2, 1, 3}});
  else if (j0 == 2) pl.step_perm(Perm{{3, 2, 1}});

  Vec3<K> w = pl.m.col(0);
  int k0 = 0;
  for (int i = 0; i < 3; ++i)
    if (!FTK::is_zero(w(i))) { k0 = i; break; }
  K c1 = pl.m(k0, 1) / w(k0);
  K c2 = pl.m(k0, 2) / w(k0);

  if (FTK::is_zero(w(0))) {
    // Case 2: first coordinate of e1^2 vanishes
    if (FTK::is_zero(w(1))) {
      pl.step_perm(Perm{{1, 3, 2}});  // ensure omega_2 != 0
      dim1_reduce(pl, depth + 1);
      return;
    }
    if (!FTK::is_zero(c1)) {           // Case 2.1: cycle to {e2,e3,e1}
      pl.step_perm(Perm{{2, 3, 1}});
      dim1_reduce(pl, depth + 1);
      return;
    }
    if (!FTK::is_zero(c2 * w(2))) {    // Case 2.2.1: swap to {e3,e2,e1}
      pl.step_perm(Perm{{3, 2, 1}});
      dim1_reduce(pl, depth + 1);
      return;
    }
    if (FTK::is_zero(c2)) {
      // Case 2.2.2.1: B' = {w2 e2 + w3 e3, (1/w2) e3, e1}  ->  Table 1 row 7
      Vec3<K> f1{zero, w(1), w(2)};
      Vec3<K> f2{zero, zero, one / w(1)};
      pl.step(cols_matrix<K>(f1, f2, basis_vec<K>(1)));
      return;
    }
    // Case 2.2.2.2 (c2 != 0, w3 = 0): B' = {w2 e2, e1, e3/sqrt(c2)} -> row 6
    Vec3<K> f1{zero, w(1), zero};
    Vec3<K> f3{zero, zero, one / FTK::root(c2, 2)};
    pl.step(cols_matrix<K>(f1, basis_vec<K>(1), f3));
    return;
  }

  // Case 1: normalize e1^2 to have first coordinate 1
  pl.step(diag_mat<K>(one / w(0), one, one));
  w = pl.m.col(0);
  c1 = pl.m(k0, 1) / w(k0);
  c2 = pl.m(k0, 2) / w(k0);
  K e = one + w(1) * w(1) * c1 + w(2) * w(2) * c2;

  if (FTK::is_zero(e)) {
    // Case 1.1: no extension property
    K f = one + w(2) * w(2) * c2;
    if (!FTK::is_zero(f)) {
      if (!FTK::is_zero(w(2))) {
        // 1.1.1.1
        pl.step(diag_mat<K>(one, w(1), w(2)));
        K x = pl.m(0, 2);  // = w3^2 c2 after the scaling
        if (FTK::is_zero(x)) {
          // c2 = 0: B''' = {e2, e1+e3, e3} -> row 2
          Vec3<K> f2{one, zero, one};
          pl.step(cols_matrix<K>(basis_vec<K>(2), f2, basis_vec<K>(3)));
          return;
        }
        // c2 != 0: the proof's dense change -> row 1
        K two = FTK::from_int(2);
        K g = x * (x + one) * (x + one);
        K den = two * (one + x);
        K ap = (one + g) / den, am = (g - one) / den;
        Mat3<K> p;
        p << ap, am, zero - x, am, ap, zero, ap, am, one;
        pl.step(p);
        return;
      }
      // 1.1.1.2 (w3 = 0, 1 + w2^2 c1 = 0)
      if (!FTK::is_zero(c2)) {
        pl.step(diag_mat<K>(one, w(1), one / FTK::root(c2, 2)));  // -> row 1
      } else {
        pl.step(diag_mat<K>(one, w(1), one));                     // -> row 2
      }
      return;
    }
    // 1.1.2 (1 + w3^2 c2 = 0): swap e2 <-> e3 and start again
    pl.step_perm(Perm{{1, 3, 2}});
    dim1_reduce(pl, depth + 1);
    return;
  }

  // Case 1.2: extension property holds
  bool z1 = FTK::is_zero(c1), z2 = FTK::is_zero(c2);
  if (z1 && z2) {
    // 1.2.1: B' = {e1^2, e2+e3, 2e2+e3} -> row 5
    Vec3<K> f2{zero, one, one};
    Vec3<K> f3{zero, FTK::from_int(2), one};
    pl.step(cols_matrix<K>(Vec3<K>(pl.m.col(0)), f2, f3));
    return;
  }
  if (z1 && !z2) {
    // 1.2.2 -> row 4
    Vec3<K> f3{zero - w(2) * c2, one, one};
    pl.step(cols_matrix<K>(Vec3<K>(pl.m.col(0)), basis_vec<K>(2), f3));
    K fp = pl.m(0, 0);  // = 1 + c2 w3^2
    pl.step(diag_mat<K>(one / fp, one, one / (FTK::root(c2, 2) * fp)));
    return;
  }
  if (!z1 && z2) {
    // 1.2.4: swap into 1.2.2
    pl.step_perm(Perm{{1, 3, 2}});
    dim1_reduce(pl, depth + 1);
    return;
  }
  // 1.2.3 (c1, c2 != 0)
  K g = one + w(1) * w(1) * c1;
  if (!FTK::is_zero(g)) {
    // 1.2.3.1 -> row 3
    Mat3<K> p;
    p << one, zero - w(1) * c1, (zero - w(2) * c2) / g,
         w(1), one, (zero - w(2) * w(1) * c2) / g,
         w(2), zero, one;
    pl.step(p);
    K ee = pl.m(0, 0), bb = pl.m(0, 1), cc = pl.m(0, 2);
    pl.step(diag_mat<K>(one / ee, one / FTK::root(bb * ee, 2),
                        one / FTK::root(cc * ee, 2)));
    return;
  }
  // 1.2.3.2 (1 + w2^2 c1 = 0) -> row 3 through the sqrt(-1) change
  K two = FTK::from_int(2);
  Mat3<K> p;
  p << one, (zero - c2) / two, (two - w(2) * w(2) * c2) / two,
       w(1), w(1) * c2 / two, w(1) * (one + c2 * w(2) * w(2) / two),
       w(2), one / w(2), w(2);
  pl.step(p);
  K y = pl.m(0, 0);  // = w3^2 c2
  K c2v = pl.m(0, 1) * pl.m(0, 0);  // (c2/w3^2) * (w3^2 c2) = c2^2
  // scale to [[1,1,1],0,0]: diag(1/y, 1/sqrt(m12*y... ), sqrt(-1)/y) per the proof
  K m12 = pl.m(0, 1);
  pl.step(diag_mat<K>(one / y, one / FTK::root(m12 * y, 2),
                      FTK::root(zero - one, 2) / y));
  (void)c2v;
  return;
}

// Stable row determination for dim A^2 = 1: the class is decided by whether
// u^2 = Q u has Q != 0 (with u spanning A^2), the annihilator dimension, and
// whether u lies in the span of the annihilator basis vectors.
template <class K>
int dim1_target_row(const Mat3<K>& m, bool& near_boundary) {
  using FTK = field_traits<K>;
  near_boundary = false;
  int jstar = 0;
  double best = -1.0;
  for (int j = 0; j < 3; ++j) {
    double norm = 0.0;
    for (int i = 0; i < 3; ++i) norm += FTK::abs(m(i, j));
    if (norm > best) { best = norm; jstar = j; }
  }
  Vec3<K> w = m.col(jstar);
  int k0 = 0;
  double wbest = -1.0;
  for (int i = 0; i < 3; ++i)
    if (FTK::abs(w(i)) > wbest) { wbest = FTK::abs(w(i)); k0 = i; }
  std::array<K, 3> c{};
  for (int j = 0; j < 3; ++j) c[j] = m(k0, j) / w(k0);
  K q = FTK::zero();
  double qscale = 1.0;
  for (int j = 0; j < 3; ++j) {
    K term = c[j] * w(j) * w(j);
    qscale = std::max(qscale, FTK::abs(term));
    q += term;
  }
  bool qzero;
  if constexpr (FTK::exact) {
    qzero = FTK::is_zero(q);
  } else {
    qzero = FTK::abs(q) <= complex_tolerance() * qscale;
    if (qzero && FTK::abs(q) > 0) near_boundary = true;
  }
  int ann = annihilator_dim(m);
  bool u_in_ann = true;
  for (int j = 0; j < 3; ++j) {
    bool col_zero = true;
    for (int i = 0; i < 3; ++i)
      if (!FTK::is_zero(m(i, j))) { col_zero = false; break; }
    if (!col_zero && !FTK::is_zero(w(j))) u_in_ann = false;
  }
  if (!qzero) return ann == 0 ? 3 : ann == 1 ? 4 : 5;
  if (u_in_ann) return ann == 1 ? 6 : 7;
  return ann == 0 ? 1 : 2;
}

// direct criterion for the extension property of A^2 (dim A^2 = 1)
template <class K>
bool extension_property_impl(Mat3<K> m, int depth = 0) {
  using FTK = field_traits<K>;
  if (depth > 6) throw std::logic_error("extension_property: no termination");
  int j0 = -1;
  for (int j = 0; j < 3 && j0 < 0; ++j)
    for (int i = 0; i < 3; ++i)
      if (!FTK::is_zero(m(i, j))) { j0 = j; break; }
  if (j0 != 0) {
    Perm s = j0 == 1 ? Perm{{2, 1, 3}} : Perm{{3, 2, 1}};
    return extension_property_impl(act_permutation(s, m), depth + 1);
  }
  Vec3<K> w = m.col(0);
  int k0 = 0;
  for (int i = 0; i < 3; ++i)
    if (!FTK::is_zero(w(i))) { k0 = i; break; }
  K c1 = m(k0, 1) / w(k0);
  K c2 = m(k0, 2) / w(k0);
  if (FTK::is_zero(w(0))) {
    if (FTK::is_zero(w(1)))
      return extension_property_impl(act_permutation(Perm{{1, 3, 2}}, m), depth + 1);
    if (!FTK::is_zero(c1))
      return extension_property_impl(act_permutation(Perm{{2, 3, 1}}, m), depth + 1);
    if (!FTK::is_zero(c2 * w(2)))
      return extension_property_impl(act_permutation(Perm{{3, 2, 1}}, m), depth + 1);
    return true;  // cases 2.2.2.x always extend
  }
  K e = w(0) * w(0) + w(1) * w(1) * c1 + w(2) * w(2) * c2;
  return !FTK::is_zero(e);
}

template <class K>
ClassificationResult<K> canonicalize_dim1_impl(const Mat3<K>& m) {
  bool near_boundary = false;
  int row = dim1_target_row<K>(m, near_boundary);
  Mat3<K> canonical = eval_mat<K>(table1().rows[row - 1], EvalEnv<K>{});
  Pipeline<K> pl{m};
  dim1_reduce(pl);
  ClassificationResult<K> out;
  out.type.dim_class = 1;
  out.type.table = "T1";
  out.type.row = row;
  out.type.canonical_matrix = canonical;
  out.type.near_branch_boundary = near_boundary;
  out.witness = pl.w;
  if (!mat_eq<K, 3, 3>(pl.m, canonical) || !is_natural_change(m, out.witness)) {
    // the constructive route lost precision (near-degenerate branch data);
    // refine the witness against the exact canonical form
    if (!newton_polish_witness(m, canonical, out.witness) && !near_boundary)
      throw std::logic_error("dim1 canonical form not in Table 1");
  }
  return out;
}

// ---------------------------------------------------------------------------
// dim A^2 = 2, annihilator 1 (c1 = c2 = 0): Tables 14..17

template <class K>
void dim2c_offer(CandidatePool<K>& pool, Pipeline<K> pl) {
  using FTK = field_traits<K>;
  // 2x2 block and third row
  MatX<K> block(2, 2);
  block << pl.m(0, 0), pl.m(0, 1), pl.m(1, 0), pl.m(1, 1);
  if (rank<K>(block) == 2) {
    // clear the third row: w31 = w11 p31 + w21 p32, w32 = w12 p31 + w22 p32
    K det = pl.m(0, 0) * pl.m(1, 1) - pl.m(1, 0) * pl.m(0, 1);
    K p31 = (pl.m(2, 0) * pl.m(1, 1) - pl.m(1, 0) * pl.m(2, 1)) / det;
    K p32 = (pl.m(0, 0) * pl.m(2, 1) - pl.m(2, 0) * pl.m(0, 1)) / det;
    Mat3<K> p = identity_mat<K>();
    p(2, 0) = p31;
    p(2, 1) = p32;
    pl.step(p);
  } else {
    // rank-1 block: the third row can only be shifted along the block's rows
    bool w11 = !FTK::is_zero(pl.m(0, 0)), w12 = !FTK::is_zero(pl.m(0, 1));
    bool w21 = !FTK::is_zero(pl.m(1, 0)), w22 = !FTK::is_zero(pl.m(1, 1));
    bool row1 = w11 || w12, row2 = w21 || w22;
    auto shift = [&](const K& p31, const K& p32) {
      Mat3<K> p = identity_mat<K>();
      p(2, 0) = p31;
      p(2, 1) = p32;
      pl.step(p);
    };
    if (row1 && row2 && w11 && w12) {
      // four nonzero entries: keep a fully nonzero third row (Table 17 row 2)
      for (int t = 0; t <= 6; ++t) {
        K tt = FTK::from_int(t);
        K r31 = pl.m(2, 0) - tt * pl.m(0, 0);
        K r32 = pl.m(2, 1) - tt * pl.m(0, 1);
        if (!FTK::is_zero(r31) && !FTK::is_zero(r32)) {
          if (t > 0) shift(tt, FTK::zero());
          break;
        }
      }
    } else if (row1 && row2) {
      // block columns: one zero column ([[x,0],[y,0]] type): clear (3,1)
      if (w11 || w21) {
        if (w11) shift(pl.m(2, 0) / pl.m(0, 0), FTK::zero());
        else shift(FTK::zero(), pl.m(2, 0) / pl.m(1, 0));
      } else {
        if (w12) shift(pl.m(2, 1) / pl.m(0, 1), FTK::zero());
        else shift(FTK::zero(), pl.m(2, 1) / pl.m(1, 1));
      }
    } else if (row1) {
      if (w11 && w12) {
        shift(pl.m(2, 1) / pl.m(0, 1), FTK::zero());       // -> Table 15 row 3 shape
      } else if (w11) {
        shift(pl.m(2, 0) / pl.m(0, 0), FTK::zero());       // -> Table 14 row 1 shape
      } else {
        shift(pl.m(2, 1) / pl.m(0, 1), FTK::zero());       // -> Table 14 row 2 shape
      }
    }
    // row1-zero shapes are reached through the swapped orientation
  }
  // match against the T14..T17 families by pattern, normalizing diagonally
  auto pat = nonzero_pattern(pl.m);
  for (const Family* f : families_of_class(2)) {
    if (f->id.rfind("T14", 0) != 0 && f->id.rfind("T15", 0) != 0 &&
        f->id.rfind("T16", 0) != 0 && f->id.rfind("T17", 0) != 0)
      continue;
    if (f->pattern != pat) continue;
    offer_diag_matches(pool, *f, pl.m, pl.w, false);
  }
}

template <class K>
ClassificationResult<K> canonicalize_dim2c(const Mat3<K>& m) {
  using FTK = field_traits<K>;
  // move the zero column to position 3
  int zc = -1;
  for (int j = 0; j < 3; ++j) {
    bool zero = true;
    for (int i = 0; i < 3; ++i)
      if (!FTK::is_zero(m(i, j))) { zero = false; break; }
    if (zero) { zc = j; break; }
  }
  if (zc < 0) throw std::logic_error("dim2c without a zero column");
  Pipeline<K> pl{m};
  if (zc == 0) pl.step_perm(Perm{{2, 3, 1}});
  else if (zc == 1) pl.step_perm(Perm{{1, 3, 2}});

  CandidatePool<K> pool;
  dim2c_offer(pool, pl);
  {  // the (1,2)-swapped orientation
    Pipeline<K> pl2 = pl;
    pl2.step_perm(Perm{{2, 1, 3}});
    dim2c_offer(pool, pl2);
  }
  if (!pool.best) {
    if (pool.root_failures > 0)
      throw RootUnavailable("canonical form requires roots unavailable in this field");
    throw std::logic_error("dim2c: no family matched");
  }
  ClassificationResult<K> out;
  out.type = *pool.best;
  out.witness = pool.best_witness;
  return out;
}

// ---------------------------------------------------------------------------
// dim A^2 = 2, annihilator 0, not (2LI): the set-S regime (Tables 8..13)

// which rows of a column are nonzero
template <class K>
int col_rowmask(const Mat3<K>& m, int col) {
  int mask = 0;
  for (int i = 0; i < 3; ++i)
    if (!field_traits<K>::is_zero(m(i, col))) mask |= 1 << i;
  return mask;
}

// S-subtype ids by (col1 mask, col2 mask); masks: {1}=1, {2,3}=6, {1,2,3}=7
inline int s_subtype(int m1, int m2) {
  if (m1 == 1 && m2 == 6) return 1;
  if (m1 == 6 && m2 == 1) return 2;
  if (m1 == 1 && m2 == 7) return 3;
  if (m1 == 6 && m2 == 6) return 4;
  if (m1 == 7 && m2 == 1) return 5;
  if (m1 == 7 && m2 == 6) return 6;
  if (m1 == 6 && m2 == 7) return 7;
  if (m1 == 7 && m2 == 7) return 8;
  return 0;
}

// rotation used by the S reduction: acts on the (2,3) block, maps the
// duplicated-column parameter g to 1 when g^2 + 1 != 0
template <class K>
Mat3<K> s_rotation(const K& g) {
  using FTK = field_traits<K>;
  const K one = FTK::one();
  K den = one + g * g;
  Mat3<K> p = identity_mat<K>();
  p(1, 1) = (one + g) / den;
  p(1, 2) = (one - g) / den;
  p(2, 1) = (g - one) / den;
  p(2, 2) = (one + g) / den;
  return p;
}

template <class K>
void dim2b_offer_families(CandidatePool<K>& pool, const Pipeline<K>& pl) {
  auto pat = nonzero_pattern(pl.m);
  for (const Family* f : families_of_class(2)) {
    int tn = std::stoi(f->id.substr(1, f->id.find('.') - 1));
    if (tn < 8 || tn > 13) continue;
    if (f->pattern != pat) continue;
    offer_diag_matches(pool, *f, pl.m, pl.w, false);
  }
}

// continuous renormalizations from the primed tables: the +-i set-S families
// and the rank-one-block annihilator-1 family; each returns candidate change
// matrices onto the canonical slice (verified downstream)
template <>
std::vector<Mat3<Cx>> continuous_normalizers<Cx>(const std::string& family,
                                                 const std::map<std::string, Cx>& params) {
  std::vector<Mat3<Cx>> out;
  auto get = [&](const char* n) { return params.at(n); };
  auto rot23 = [](Cx p22, Cx p23, Cx p32, Cx p33, Cx p11 = 1.0) {
    Mat3<Cx> p = Mat3<Cx>::Constant(Cx(0.0));
    p(0, 0) = p11;
    p(1, 1) = p22; p(1, 2) = p23; p(2, 1) = p32; p(2, 2) = p33;
    return p;
  };
  const Cx one(1.0);
  if (family == "T9.5" || family == "T9.6") {
    // [[1,1,1],[c a,0,0],[a,0,0]]-shaped: a scales by any t != 0; send a -> 1
    Cx a = get("alpha");
    if (!is_zero(a - one)) {
      Cx t = one / a;
      Cx p22 = (t + one / t) / 2.0;
      Cx q = (t - one / t) / (2.0 * Cx(0.0, 1.0));
      out.push_back(rot23(p22, -q, q, p22));
    }
  } else if (family == "T10.2" || family == "T10.3") {
    Cx c = family == "T10.2" ? Cx(0.0, 1.0) : Cx(0.0, -1.0);
    Cx a = get("alpha");
    if (!is_zero(a - one)) {
      Cx p11 = nth_root((one - c) / (a - c), 2);
      Cx d = 2.0 * c + (a - c) * p11 * p11;
      out.push_back(rot23((c + a * p11 * p11) / d, (p11 * p11 - one) / d,
                          (one - p11 * p11) / d, (c + a * p11 * p11) / d, p11));
    }
  } else if (family == "T11.2" || family == "T11.3") {
    Cx c = family == "T11.2" ? Cx(0.0, 1.0) : Cx(0.0, -1.0);
    Cx a = get("alpha");
    if (!is_zero(a - one)) {
      Cx p = (one / a + one) / 2.0;  // alpha (2p-1) = 1
      out.push_back(rot23(p, c * (one - p), c * (p - one), p, 2.0 * p - one));
    }
  } else if (family == "T11.5" || family == "T11.6") {
    Cx c = family == "T11.5" ? Cx(0.0, 1.0) : Cx(0.0, -1.0);
    Cx a = get("alpha"), b = get("beta");
    // (c b (p-1) + a p)/(2p-1) = 1, linear in p
    Cx denom = c * b + a - 2.0;
    if (!is_zero(denom)) {
      Cx p = (c * b - one) / denom;
      if (!is_zero(2.0 * p - one))
        out.push_back(rot23(p, -c * (p - one), c * (p - one), p));
    }
  } else if (family == "T12.2" || family == "T12.3") {
    Cx c = family == "T12.2" ? Cx(0.0, 1.0) : Cx(0.0, -1.0);
    Cx a = get("alpha"), b = get("beta");
    // (c - 2p)(c b p + a(-c + p)) = 1 : quadratic in p (for c = i variant as
    // printed; the -i variant mirrors). both roots offered.
    // expand: -2 p^2 (cb + a)... solve numerically via the quadratic formula.
    Cx A = -2.0 * (c * b + a);
    Cx B = c * (c * b + a) + 2.0 * c * a;
    Cx C = -c * c * a - one;
    if (!is_zero(A)) {
      Cx disc = nth_root(B * B - 4.0 * A * C, 2);
      for (Cx p : {(-B + disc) / (2.0 * A), (-B - disc) / (2.0 * A)})
        out.push_back(rot23(one + c * p, p, -p, one + c * p, one + 2.0 * c * p));
    } else if (!is_zero(B)) {
      Cx p = -C / B;
      out.push_back(rot23(one + c * p, p, -p, one + c * p, one + 2.0 * c * p));
    }
  } else if (family == "T13.2" || family == "T13.3") {
    Cx c = family == "T13.2" ? Cx(0.0, 1.0) : Cx(0.0, -1.0);
    Cx a = get("alpha");
    if (!is_zero(a - one)) {
      Cx p = (one / a + one) / 2.0;
      out.push_back(rot23(p, c * (one - p), -c * (one - p), p, 2.0 * p - one));
    }
  } else if (family == "T17.2") {
    // the third-row parameter moves freely: normalize beta to -1
    Cx b = get("beta");
    if (!is_zero(b + one)) {
      Cx p33 = (one - b) / 2.0;
      Mat3<Cx> p = Mat3<Cx>::Identity();
      p(2, 0) = one - p33;
      p(2, 2) = p33;
      out.push_back(p);
    }
  }
  return out;
}

template <>
std::vector<Mat3<Rational>> continuous_normalizers<Rational>(
    const std::string& family, const std::map<std::string, Rational>& params) {
  // only the beta-normalization of the annihilator-1 rank-one-block family is
  // rational; the +-i families do not arise over the rationals
  std::vector<Mat3<Rational>> out;
  if (family == "T17.2") {
    Rational beta = params.at("beta");
    if (beta != Rational(-1)) {
      Rational p33 = (Rational(1) - beta) / Rational(2);
      Mat3<Rational> p = identity_mat<Rational>();
      p(2, 0) = Rational(1) - p33;
      p(2, 2) = p33;
      out.push_back(p);
    }
  }
  return out;
}

template <class K>
ClassificationResult<K> canonicalize_dim2b(const Mat3<K>& m) {
  using FTK = field_traits<K>;
  const K one = FTK::one(), zero = FTK::zero();

  // locate the dependent column pair and move it to (2,3)
  Pipeline<K> pl{m};
  int di = -1, dj = -1;
  for (int a = 0; a < 3 && di < 0; ++a)
    for (int b = a + 1; b < 3; ++b) {
      MatX<K> pair(3, 2);
      pair.col(0) = m.col(a);
      pair.col(1) = m.col(b);
      if (rank<K>(pair) == 1) { di = a; dj = b; break; }
    }
  if (di < 0) throw std::logic_error("dim2b without a dependent column pair");
  if (di == 0 && dj == 1) pl.step_perm(Perm{{3, 1, 2}});
  else if (di == 0 && dj == 2) pl.step_perm(Perm{{2, 1, 3}});

  // c2 with col3 = c2 col2
  int k0 = 0;
  for (int i = 0; i < 3; ++i)
    if (!FTK::is_zero(pl.m(i, 1))) { k0 = i; break; }
  K c2 = pl.m(k0, 2) / pl.m(k0, 1);

  // e2' = sqrt(c2) e2 - e3, e3' = sqrt(c2) e2 + e3  (char != 2)
  K sc2 = FTK::root(c2, 2);
  {
    Mat3<K> p = identity_mat<K>();
    p(1, 1) = sc2;
    p(1, 2) = sc2;
    p(2, 1) = zero - one;
    p(2, 2) = one;
    pl.step(p);
  }

  // spread zeros inside the (2,3) rows so the column patterns match set S
  auto s_like = [&](const Pipeline<K>& q) {
    int m1 = col_rowmask(q.m, 0), m2 = col_rowmask(q.m, 1);
    return s_subtype(m1, m2) != 0;
  };
  if (!s_like(pl)) {
    bool done = false;
    for (int s = 1; s <= 17 && !done; ++s) {
      Pipeline<K> trial = pl;
      Mat3<K> q = identity_mat<K>();
      q(1, 1) = one;
      q(1, 2) = zero - FTK::from_int(s);
      q(2, 1) = FTK::from_int(s);
      q(2, 2) = one;
      trial.step(q);
      if (s_like(trial)) {
        pl = trial;
        done = true;
      }
    }
    if (!done) throw std::logic_error("dim2b: could not reach a set-S pattern");
  }

  CandidatePool<K> pool;
  // candidate reducers: identity, the gamma rotation(s), sign flip, and for
  // subtype 5 the alpha/beta rotation and the {e1, +-e3, e2} swaps
  auto offer_all = [&](Pipeline<K> q) {
    std::vector<Mat3<K>> reducers;
    reducers.push_back(identity_mat<K>());
    Mat3<K> flip = identity_mat<K>();
    flip(2, 2) = zero - one;
    reducers.push_back(flip);

    int sub = s_subtype(col_rowmask(q.m, 0), col_rowmask(q.m, 1));
    if (sub != 0) {
      // branch ratio g for the duplicated-column parameter
      K num = zero, den = zero;
      if (sub == 2) { num = q.m(2, 0); den = q.m(1, 0); }
      else if (sub == 5) { num = zero; den = one; }
      else { num = q.m(2, 1); den = q.m(1, 1); }
      if (!FTK::is_zero(den) && sub != 5) {
        K g = num / den;
        K disc = one + g * g;
        if (!FTK::is_zero(disc)) {
          reducers.push_back(s_rotation(g));
          reducers.push_back(s_rotation(zero - g));
        }
      }
      if (sub == 5) {
        Mat3<K> sw = identity_mat<K>();
        sw(1, 1) = zero; sw(2, 2) = zero;
        sw(1, 2) = one; sw(2, 1) = one;
        reducers.push_back(sw);
        Mat3<K> swm = sw;
        swm(2, 1) = zero - one;
        reducers.push_back(swm);
        // parameters of the normalized [[1,1,1],[a,0,0],[b,0,0]] form: their
        // squares are scale-invariant, the signs are enumerated
        K m11 = q.m(0, 0), m12 = q.m(0, 1), m21 = q.m(1, 0), m31 = q.m(2, 0);
        K m113 = m11 * m11 * m11;
        K a2 = m12 * m21 * m21 / m113;
        K b2 = m12 * m31 * m31 / m113;
        K disc = a2 + b2;
        if (!FTK::is_zero(disc)) {
          try {
            K a0 = FTK::root(a2, 2);
            K b0 = FTK::root(b2, 2);
            K s0 = FTK::root(disc - one, 2);
            for (int sa = 0; sa < 2; ++sa)
              for (int sb = 0; sb < 2; ++sb)
                for (int ss = 0; ss < 2; ++ss) {
                  K a = sa ? zero - a0 : a0;
                  K b = sb ? zero - b0 : b0;
                  K s = ss ? zero - s0 : s0;
                  Mat3<K> r = identity_mat<K>();
                  r(1, 1) = (a - b * s) / disc;
                  r(1, 2) = (zero - (b + a * s)) / disc;
                  r(2, 1) = (b + a * s) / disc;
                  r(2, 2) = (a - b * s) / disc;
                  reducers.push_back(r);
                }
          } catch (const RootUnavailable&) {
            ++pool.root_failures;
          }
        }
      }
    }
    for (const auto& r : reducers) {
      Pipeline<K> t = q;
      try {
        t.step(r);
      } catch (const std::exception&) {
        continue;
      }
      dim2b_offer_families(pool, t);
    }
  };

  offer_all(pl);
  {
    Pipeline<K> swapped = pl;
    swapped.step_perm(Perm{{1, 3, 2}});
    offer_all(swapped);
  }

  if (!pool.best) {
    if (pool.root_failures > 0)
      throw RootUnavailable("canonical form requires roots unavailable in this field");
    throw std::logic_error("dim2b: no family matched");
  }
  ClassificationResult<K> out;
  out.type = *pool.best;
  out.witness = pool.best_witness;
  return out;
}

}  // namespace

const std::array<Dim1RowFacts, 7>& table1_facts() { return kTable1Facts; }

template <class K>
InvariantProfile invariant_profile(const Mat3<K>& m) {
  InvariantProfile p;
  ZeroProfile z = zero_profile(m);
  p.zero_count = z.zero_count;
  p.diag_zero_count = z.diag_zero_count;
  p.rank = z.rank;
  p.dim_square = z.rank;
  p.ann_dim = annihilator_dim(m);
  if (z.rank == 1) {
    p.extension_property = extension_property(m);
    auto [pd, gen] = has_pd2ei(m);
    p.pd2ei = pd;
  } else if (z.rank == 2) {
    p.property_2li = property_2li(m);
  }
  return p;
}

template <class K>
bool extension_property(const Mat3<K>& m) {
  if (rank3(m) != 1) throw WrongDimensionClass("extension_property needs dim A^2 = 1");
  return extension_property_impl<K>(m);
}

template <class K>
std::pair<bool, std::optional<Vec3<K>>> has_pd2ei(const Mat3<K>& m) {
  if (rank3(m) != 1) throw WrongDimensionClass("has_pd2ei needs dim A^2 = 1");
  ClassificationResult<K> r = canonicalize_dim1_impl<K>(m);
  const Dim1RowFacts& facts = kTable1Facts[r.type.row - 1];
  if (!facts.pd2ei) return {false, std::nullopt};
  using FTK = field_traits<K>;
  Vec3<K> gen{FTK::zero(), FTK::zero(), FTK::one()};
  if (r.type.row == 2)
    gen = Vec3<K>{FTK::one(), FTK::one(), FTK::one()};
  return {true, gen};
}

template <class K>
ClassificationResult<K> canonicalize_dim1(const Mat3<K>& m) {
  if (rank3(m) != 1) throw WrongDimensionClass("canonicalize_dim1 needs dim A^2 = 1");
  ClassificationResult<K> r = canonicalize_dim1_impl<K>(m);
  r.profile = invariant_profile(m);
  // consistency with the Table 1 row facts
  const Dim1RowFacts& facts = kTable1Facts[r.type.row - 1];
  if (r.profile.ann_dim != facts.ann_dim ||
      r.profile.extension_property != facts.extension_property ||
      r.profile.pd2ei != facts.pd2ei)
    throw std::logic_error("dim1 invariants disagree with the canonical row");
  if (!mat_eq<K, 3, 3>(transform(m, r.witness, true), r.type.canonical_matrix))
    throw std::logic_error("dim1 witness verification failed");
  return r;
}

template <class K>
void finalize_witness(const Mat3<K>& m, ClassificationResult<K>& r,
                      const char* what) {
  if (mat_eq<K, 3, 3>(transform(m, r.witness, true), r.type.canonical_matrix) &&
      is_natural_change(m, r.witness))
    return;
  if (newton_polish_witness(m, r.type.canonical_matrix, r.witness)) return;
  if (r.type.near_branch_boundary) return;  // audited, not strictly verified
  throw std::logic_error(std::string(what) + " witness verification failed");
}

template <class K>
ClassificationResult<K> canonicalize_dim2(const Mat3<K>& m) {
  if (rank3(m) != 2) throw WrongDimensionClass("canonicalize_dim2 needs dim A^2 = 2");
  ClassificationResult<K> r = annihilator_dim(m) == 1 ? canonicalize_dim2c<K>(m)
                              : property_2li(m)       ? canonicalize_group_regime<K>(m, 2)
                                                      : canonicalize_dim2b<K>(m);
  r.profile = invariant_profile(m);
  finalize_witness(m, r, "dim2");
  return r;
}

template <class K>
ClassificationResult<K> canonicalize_dim3(const Mat3<K>& m) {
  if (rank3(m) != 3) throw WrongDimensionClass("canonicalize_dim3 needs dim A^2 = 3");
  ClassificationResult<K> r = canonicalize_group_regime<K>(m, 3);
  r.profile = invariant_profile(m);
  finalize_witness(m, r, "dim3");
  return r;
}

template <class K>
ClassificationResult<K> classify(const Mat3<K>& m) {
  int r = rank3(m);
  switch (r) {
    case 0: {
      ClassificationResult<K> out;
      out.type.dim_class = 0;
      out.type.table = "0";
      out.type.row = 0;
      out.type.canonical_matrix = zero_mat<K>();
      out.witness = identity_mat<K>();
      out.profile = invariant_profile(m);
      return out;
    }
    case 1: return canonicalize_dim1<K>(m);
    case 2: return canonicalize_dim2<K>(m);
    default: return canonicalize_dim3<K>(m);
  }
}

template ClassificationResult<Cx> classify<Cx>(const Mat3<Cx>&);
template ClassificationResult<Rational> classify<Rational>(const Mat3<Rational>&);
template ClassificationResult<Cx> canonicalize_dim1<Cx>(const Mat3<Cx>&);
template ClassificationResult<Rational> canonicalize_dim1<Rational>(const Mat3<Rational>&);
template ClassificationResult<Cx> canonicalize_dim2<Cx>(const Mat3<Cx>&);
template ClassificationResult<Rational> canonicalize_dim2<Rational>(const Mat3<Rational>&);
template ClassificationResult<Cx> canonicalize_dim3<Cx>(const Mat3<Cx>&);
template ClassificationResult<Rational> canonicalize_dim3<Rational>(const Mat3<Rational>&);
template bool extension_property<Cx>(const Mat3<Cx>&);
template bool extension_property<Rational>(const Mat3<Rational>&);
template std::pair<bool, std::optional<Vec3<Cx>>> has_pd2ei<Cx>(const Mat3<Cx>&);
template std::pair<bool, std::optional<Vec3<Rational>>> has_pd2ei<Rational>(
    const Mat3<Rational>&);
template InvariantProfile invariant_profile<Cx>(const Mat3<Cx>&);
template InvariantProfile invariant_profile<Rational>(const Mat3<Rational>&);

}  // namespace evo3
