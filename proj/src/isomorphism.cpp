#include "evo3/isomorphism.hpp"

namespace evo3 {

namespace {

template <class K>
Mat3<K> identity_mat() {
  Mat3<K> m = Mat3<K>::Constant(field_traits<K>::zero());
  for (int i = 0; i < 3; ++i) m(i, i) = field_traits<K>::one();
  return m;
}

template <class K>
bool cols23_equal(const Mat3<K>& m) {
  for (int i = 0; i < 3; ++i)
    if (!field_traits<K>::eq(m(i, 1), m(i, 2))) return false;
  return true;
}

// #nonzeros outside the annihilator row, for the c1 = c2 = 0 regime
template <class K>
int dim2c_row_count(const Mat3<K>& m) {
  int zc = -1;
  for (int j = 0; j < 3; ++j) {
    bool zero = true;
    for (int i = 0; i < 3; ++i)
      if (!field_traits<K>::is_zero(m(i, j))) { zero = false; break; }
    if (zero) { zc = j; break; }
  }
  if (zc < 0) return -1;
  int n = 0;
  for (int i = 0; i < 3; ++i) {
    if (i == zc) continue;
    for (int j = 0; j < 3; ++j)
      if (!field_traits<K>::is_zero(m(i, j))) ++n;
  }
  return n;
}

template <class K>
std::optional<Mat3<K>> verify_witness(const Mat3<K>& m1, const Mat3<K>& m2,
                                      const Mat3<K>& p) {
  if (field_traits<K>::is_zero(det3(p))) return std::nullopt;
  if (!is_natural_change(m1, p)) return std::nullopt;
  if (!mat_eq<K, 3, 3>(transform(m1, p, true), m2)) return std::nullopt;
  return p;
}

// Q = diag(p11, b, eps*b) * Rot(t) with Rot mixing e2, e3
template <class K>
std::optional<Mat3<K>> q_family_search(const Mat3<K>& m1, const Mat3<K>& m2) {
  using FTK = field_traits<K>;
  if (!cols23_equal(m1))
    throw RegimeMismatch("Q family needs equal columns 2 and 3");
  if (!cols23_equal(m2)) return std::nullopt;
  const K one = FTK::one(), zero = FTK::zero();

  auto try_from = [&](const Mat3<K>& a) -> std::optional<Mat3<K>> {
    // candidate rotation parameters from matching the duplicated-column ratio
    std::vector<K> ts{zero};
    K y = a(1, 1), z = a(2, 1);
    K y2 = m2(1, 1), z2 = m2(2, 1);
    if (!FTK::is_zero(y2)) {
      K r2 = z2 / y2;
      for (int sgn = 0; sgn < 2; ++sgn) {
        K s = sgn ? zero - one : one;
        K den = y + s * r2 * z;
        if (FTK::is_zero(den)) continue;
        ts.push_back((z - s * r2 * y) / den);
      }
    } else if (!FTK::is_zero(z2)) {
      // target ratio infinite: y + t z = 0
      if (!FTK::is_zero(z)) ts.push_back((zero - y) / z);
    }
    for (const K& t : ts) {
      Mat3<K> rot = identity_mat<K>();
      rot(1, 2) = zero - t;
      rot(2, 1) = t;
      Mat3<K> img;
      try {
        img = transform(a, rot, true);
      } catch (const std::exception&) {
        continue;
      }
      for (const auto& d : solve_diagonal_transport<K>(img, m2)) {
        Mat3<K> dm = identity_mat<K>();
        for (int i = 0; i < 3; ++i) dm(i, i) = d[i];
        Mat3<K> p = Mat3<K>(rot * dm);
        if (auto w = verify_witness(m1, m2, p)) return w;
      }
    }
    return std::nullopt;
  };

  if (auto w = try_from(m1)) return w;
  // pre-swapped orientation (e2 <-> e3)
  Mat3<K> sw = identity_mat<K>();
  sw(1, 1) = FTK::zero();
  sw(2, 2) = FTK::zero();
  sw(1, 2) = FTK::one();
  sw(2, 1) = FTK::one();
  Mat3<K> m1s = transform(m1, sw, true);
  if (auto w = try_from(m1s)) return verify_witness(m1, m2, Mat3<K>(sw * *w));
  return std::nullopt;
}

// P' = [[p11,0,0],[0,p22,0],[p31,p32,p33]] (and its (1,2)-swapped variant)
template <class K>
std::optional<Mat3<K>> qprime_family_search(const Mat3<K>& m1, const Mat3<K>& m2) {
  using FTK = field_traits<K>;
  auto zero_col3 = [](const Mat3<K>& m) {
    for (int i = 0; i < 3; ++i)
      if (!field_traits<K>::is_zero(m(i, 2))) return false;
    return true;
  };
  if (!zero_col3(m1)) throw RegimeMismatch("Q' family needs a zero third column");
  if (!zero_col3(m2)) return std::nullopt;
  const K one = FTK::one(), zero = FTK::zero();

  auto attempt = [&](const Mat3<K>& a, const Mat3<K>& pre) -> std::optional<Mat3<K>> {
    // p11, p22 from the 2x2 block; sign choices enumerated through sqrt
    std::vector<std::pair<K, K>> scales;
    auto add_scale = [&](const K& p11, const K& p22) {
      if (!FTK::is_zero(p11) && !FTK::is_zero(p22)) scales.push_back({p11, p22});
    };
    try {
      if (!FTK::is_zero(a(0, 0)) && !FTK::is_zero(a(1, 1))) {
        K p11 = m2(0, 0) / a(0, 0);
        K p22 = m2(1, 1) / a(1, 1);
        add_scale(p11, p22);
      } else if (!FTK::is_zero(a(0, 0)) && !FTK::is_zero(a(0, 1))) {
        K p11 = m2(0, 0) / a(0, 0);
        K s = FTK::root(m2(0, 1) * p11 / a(0, 1), 2);
        add_scale(p11, s);
        add_scale(p11, zero - s);
      } else if (!FTK::is_zero(a(1, 1)) && !FTK::is_zero(a(1, 0))) {
        K p22 = m2(1, 1) / a(1, 1);
        K s = FTK::root(m2(1, 0) * p22 / a(1, 0), 2);
        add_scale(s, p22);
        add_scale(zero - s, p22);
      } else if (!FTK::is_zero(a(0, 1)) && !FTK::is_zero(a(1, 0))) {
        // anti-diagonal block: p11^2/p22 and p22^2/p11 determined
        K u = m2(1, 0) / a(1, 0);  // p11^2 / p22
        K v = m2(0, 1) / a(0, 1);  // p22^2 / p11
        K p11 = FTK::root(u * u * v, 3);
        if (!FTK::is_zero(p11)) add_scale(p11, p11 * p11 / u);
      }
    } catch (const RootUnavailable&) {
      return std::nullopt;
    }
    for (auto& [p11, p22] : scales) {
      // third row: linear system in (p31, p32) with p33 = 1
      // m2(3,j) = pj(w3j p11 p22 - w1j p31 p22 - w2j p11 p32)/(pj' p33)
      K r1 = m2(2, 0) * p22 / p11;  // = w31 p11 p22 - w11 p31 p22 - w21 p11 p32
      K r2 = m2(2, 1) * p11 / p22;
      K a11 = a(0, 0) * p22, a12 = a(1, 0) * p11;
      K a21 = a(0, 1) * p22, a22 = a(1, 1) * p11;
      K b1 = a(2, 0) * p11 * p22 - r1;
      K b2 = a(2, 1) * p11 * p22 - r2;
      K det = a11 * a22 - a12 * a21;
      std::vector<std::pair<K, K>> thirds;
      if (!FTK::is_zero(det)) {
        thirds.push_back({(b1 * a22 - a12 * b2) / det, (a11 * b2 - b1 * a21) / det});
      } else {
        // degenerate: try clearing against a single direction
        if (!FTK::is_zero(a11)) thirds.push_back({b1 / a11, zero});
        if (!FTK::is_zero(a12)) thirds.push_back({zero, b1 / a12});
        if (!FTK::is_zero(a21)) thirds.push_back({b2 / a21, zero});
        if (!FTK::is_zero(a22)) thirds.push_back({zero, b2 / a22});
        thirds.push_back({zero, zero});
      }
      for (auto& [p31, p32] : thirds) {
        Mat3<K> p = Mat3<K>::Constant(zero);
        p(0, 0) = p11;
        p(1, 1) = p22;
        p(2, 0) = p31;
        p(2, 1) = p32;
        p(2, 2) = one;
        if (auto w = verify_witness(m1, m2, Mat3<K>(pre * p))) return w;
      }
    }
    return std::nullopt;
  };

  if (auto w = attempt(m1, identity_mat<K>())) return w;
  Mat3<K> sw = Mat3<K>::Constant(zero);
  sw(0, 1) = one;
  sw(1, 0) = one;
  sw(2, 2) = one;
  Mat3<K> m1s = transform(m1, sw, true);
  if (auto w = attempt(m1s, sw)) return w;
  return std::nullopt;
}

template <class K>
std::optional<Mat3<K>> dim1_canonical_search(const Mat3<K>& m1, const Mat3<K>& m2) {
  if (rank3(m1) != 1) throw RegimeMismatch("dim1 witness search needs dim A^2 = 1");
  if (rank3(m2) != 1) return std::nullopt;
  try {
    auto r1 = canonicalize_dim1(m1);
    auto r2 = canonicalize_dim1(m2);
    if (r1.type.row != r2.type.row) return std::nullopt;
    Mat3<K> p = Mat3<K>(r1.witness * inverse3(r2.witness));
    return verify_witness(m1, m2, p);
  } catch (const RootUnavailable&) {
    return std::nullopt;
  }
}

}  // namespace

template <class K>
std::optional<Mat3<K>> find_witness_family(const Mat3<K>& m1, const Mat3<K>& m2,
                                           WitnessFamilyKind kind) {
  switch (kind) {
    case WitnessFamilyKind::Group: {
      auto g = find_witness_group(m1, m2);
      if (!g) return std::nullopt;
      return verify_witness(m1, m2, g->matrix());
    }
    case WitnessFamilyKind::QFamily:
      return q_family_search(m1, m2);
    case WitnessFamilyKind::QPrimeFamily:
      return qprime_family_search(m1, m2);
    case WitnessFamilyKind::Dim1Canonical:
      return dim1_canonical_search(m1, m2);
  }
  return std::nullopt;
}

template <class K>
IsoResult<K> are_isomorphic(const Mat3<K>& m1, const Mat3<K>& m2) {
  using FTK = field_traits<K>;
  IsoResult<K> out;

  InvariantProfile p1 = invariant_profile(m1);
  InvariantProfile p2 = invariant_profile(m2);
  auto no = [&](const std::string& why) {
    out.verdict = IsoVerdict::No;
    out.tier = IsoTier::Invariants;
    out.certificate = why;
    return out;
  };
  if (p1.dim_square != p2.dim_square) return no("dim A^2 differs");
  if (p1.ann_dim != p2.ann_dim) return no("annihilator dimension differs");
  if (p1.dim_square == 1) {
    if (p1.extension_property != p2.extension_property)
      return no("extension property differs");
    if (p1.pd2ei != p2.pd2ei)
      return no("principal degenerate two-dimensional evolution ideal differs");
  }
  if (p1.dim_square == 2) {
    if (p1.property_2li != p2.property_2li) return no("Property (2LI) differs");
    if (p1.ann_dim == 1) {
      int c1 = dim2c_row_count(m1), c2 = dim2c_row_count(m2);
      if (c1 != c2) return no("non-annihilator row nonzero count differs");
    }
  }
  bool group_regime = p1.dim_square == 3 ||
                      (p1.dim_square == 2 && p1.property_2li.value_or(false));
  if (group_regime) {
    ZeroProfile z1 = zero_profile(m1), z2 = zero_profile(m2);
    if (!(z1 == z2)) return no("zero profile differs in a monomial-change regime");
  }

  if (p1.dim_square == 0) {
    out.verdict = IsoVerdict::Yes;
    out.tier = IsoTier::Invariants;
    out.witness = identity_mat<K>();
    return out;
  }

  // tier 2: canonical types
  bool classified = false;
  try {
    auto r1 = classify(m1);
    auto r2 = classify(m2);
    out.type1 = r1.type;
    out.type2 = r2.type;
    classified = true;
    if (same_type(r1.type, r2.type)) {
      Mat3<K> p = Mat3<K>(r1.witness * inverse3(r2.witness));
      if (auto w = verify_witness(m1, m2, p)) {
        out.verdict = IsoVerdict::Yes;
        out.tier = IsoTier::Canonical;
        out.witness = *w;
        return out;
      }
    }
  } catch (const RootUnavailable&) {
    // fall through to the witness search tier
  }

  // tier 3: structured witness search
  out.tier = IsoTier::WitnessSearch;
  if (auto g = find_witness_family(m1, m2, WitnessFamilyKind::Group)) {
    out.verdict = IsoVerdict::Yes;
    out.witness = *g;
    return out;
  }
  try {
    if (cols23_equal(m1))
      if (auto w = find_witness_family(m1, m2, WitnessFamilyKind::QFamily)) {
        out.verdict = IsoVerdict::Yes;
        out.witness = *w;
        return out;
      }
  } catch (const RegimeMismatch&) {
  }
  try {
    if (p1.dim_square == 2 && p1.ann_dim == 1)
      if (auto w = find_witness_family(m1, m2, WitnessFamilyKind::QPrimeFamily)) {
        out.verdict = IsoVerdict::Yes;
        out.witness = *w;
        return out;
      }
  } catch (const RegimeMismatch&) {
  }
  if (p1.dim_square == 1)
    if (auto w = find_witness_family(m1, m2, WitnessFamilyKind::Dim1Canonical)) {
      out.verdict = IsoVerdict::Yes;
      out.witness = *w;
      return out;
    }

  out.verdict = IsoVerdict::UndecidedDistinct;
  if (!classified) out.certificate = "canonical forms unavailable in this field";
  return out;
}

std::vector<Cx> default_oracle_grid() {
  std::vector<Cx> g;
  auto push = [&g](Cx v) {
    for (const Cx& x : g)
      if (approx_eq(x, v)) return;
    g.push_back(v);
  };
  const Cx i(0.0, 1.0);
  for (Cx base : {Cx(1.0), Cx(-1.0), i, -i}) push(base);
  Cx zeta = field_traits<Cx>::root_of_unity(3);
  Cx phi = field_traits<Cx>::root_of_unity(7);
  for (int k = 1; k < 3; ++k) push(pow_int(zeta, k));
  for (int k = 1; k < 7; ++k) push(pow_int(phi, k));
  for (double r : {2.0, 0.5, 3.0}) {
    push(Cx(r));
    push(Cx(-r));
    for (unsigned n : {2u, 3u, 7u}) push(nth_root(Cx(r), n));
  }
  return g;
}

template <class K>
std::optional<Mat3<K>> brute_force_oracle(const Mat3<K>& m1, const Mat3<K>& m2,
                                          const std::vector<K>& grid) {
  using FTK = field_traits<K>;
  const K zero = FTK::zero(), one = FTK::one();
  // monomial family over the grid
  for (const Perm& s : all_perms()) {
    for (const K& a : grid)
      for (const K& b : grid)
        for (const K& c : grid) {
          if (FTK::is_zero(a) || FTK::is_zero(b) || FTK::is_zero(c)) continue;
          GroupElement<K> g{s, {a, b, c}};
          if (mat_eq<K, 3, 3>(act(g, m1), m2))
            if (auto w = verify_witness(m1, m2, g.matrix())) return w;
        }
  }
  // Q family (duplicated columns)
  if (cols23_equal(m1) && cols23_equal(m2)) {
    for (const K& p11 : grid)
      for (const K& p22 : grid)
        for (const K& p32 : grid)
          for (const K& p33 : grid) {
            if (FTK::is_zero(p11) || FTK::is_zero(p22) || FTK::is_zero(p33)) continue;
            Mat3<K> p = Mat3<K>::Constant(zero);
            p(0, 0) = p11;
            p(1, 1) = p22;
            p(1, 2) = zero - p32 * p33 / p22;
            p(2, 1) = p32;
            p(2, 2) = p33;
            if (FTK::is_zero(det3(p))) continue;
            if (!is_natural_change(m1, p)) continue;
            if (mat_eq<K, 3, 3>(transform(m1, p, true), m2))
              return p;
          }
  }
  // Q' family (zero third column): p33 = 1 slice of the family
  bool z3 = true;
  for (int i = 0; i < 3; ++i)
    if (!FTK::is_zero(m1(i, 2)) || !FTK::is_zero(m2(i, 2))) z3 = false;
  if (z3) {
    for (const K& p11 : grid)
      for (const K& p22 : grid)
        for (const K& p31 : grid)
          for (const K& p32 : grid) {
            if (FTK::is_zero(p11) || FTK::is_zero(p22)) continue;
            Mat3<K> p = Mat3<K>::Constant(zero);
            p(0, 0) = p11;
            p(1, 1) = p22;
            p(2, 0) = p31;
            p(2, 1) = p32;
            p(2, 2) = one;
            if (!is_natural_change(m1, p)) continue;
            if (mat_eq<K, 3, 3>(transform(m1, p, true), m2)) return p;
          }
  }
  return std::nullopt;
}

template IsoResult<Cx> are_isomorphic<Cx>(const Mat3<Cx>&, const Mat3<Cx>&);
template IsoResult<Rational> are_isomorphic<Rational>(const Mat3<Rational>&,
                                                      const Mat3<Rational>&);
template std::optional<Mat3<Cx>> find_witness_family<Cx>(const Mat3<Cx>&,
                                                         const Mat3<Cx>&,
                                                         WitnessFamilyKind);
template std::optional<Mat3<Rational>> find_witness_family<Rational>(
    const Mat3<Rational>&, const Mat3<Rational>&, WitnessFamilyKind);
template std::optional<Mat3<Cx>> brute_force_oracle<Cx>(const Mat3<Cx>&,
                                                        const Mat3<Cx>&,
                                                        const std::vector<Cx>&);
template std::optional<Mat3<Rational>> brute_force_oracle<Rational>(
    const Mat3<Rational>&, const Mat3<Rational>&, const std::vector<Rational>&);

}  // namespace evo3
