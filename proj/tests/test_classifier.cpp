#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <thread>

#include "evo3/classifier.hpp"
#include "evo3/solve_monomial.hpp"

using namespace evo3;

namespace {

Mat3<Rational> rat3(std::initializer_list<int> vals) {
  Mat3<Rational> m;
  auto it = vals.begin();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = Rational(*it++);
  return m;
}

Mat3<Cx> cx3(std::initializer_list<const char*> cells) {
  Mat3<Cx> m;
  auto it = cells.begin();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = parse_scalar<Cx>(*it++);
  return m;
}

std::mt19937& rng() {
  static std::mt19937 r(1234);
  return r;
}

Cx rnd_nonzero() {
  std::uniform_real_distribution<double> d(0.3, 1.6);
  return Cx(d(rng()), d(rng()));
}

GroupElement<Cx> rnd_elem() {
  return {all_perms()[rng()() % 6], {rnd_nonzero(), rnd_nonzero(), rnd_nonzero()}};
}

template <class K>
void check_result(const Mat3<K>& m, const ClassificationResult<K>& r) {
  CHECK(is_natural_change(m, r.witness));
  CHECK(mat_eq<K, 3, 3>(transform(m, r.witness, true), r.type.canonical_matrix));
  auto again = classify(r.type.canonical_matrix);
  CHECK(same_type(again.type, r.type));
}

}  // namespace

TEST_CASE("zero algebra") {
  auto r = classify(rat3({0, 0, 0, 0, 0, 0, 0, 0, 0}));
  CHECK(r.type.dim_class == 0);
  CHECK(r.profile.ann_dim == 3);
}

TEST_CASE("the seven Table 1 matrices map to seven distinct rows") {
  std::vector<Mat3<Rational>> mats = {
      rat3({1, -1, 1, 1, -1, 1, 0, 0, 0}), rat3({1, -1, 0, 1, -1, 0, 0, 0, 0}),
      rat3({1, 1, 1, 0, 0, 0, 0, 0, 0}),   rat3({1, 0, 1, 0, 0, 0, 0, 0, 0}),
      rat3({1, 0, 0, 0, 0, 0, 0, 0, 0}),   rat3({0, 1, 1, 0, 0, 0, 0, 0, 0}),
      rat3({0, 0, 1, 0, 0, 0, 0, 0, 0})};
  std::set<int> rows;
  for (size_t k = 0; k < mats.size(); ++k) {
    auto r = classify(mats[k]);
    CHECK(r.type.dim_class == 1);
    CHECK(r.type.table == "T1");
    CHECK(r.type.row == static_cast<int>(k) + 1);
    rows.insert(r.type.row);
    // fixed points of the classification
    CHECK(mat_eq<Rational, 3, 3>(r.type.canonical_matrix, mats[k]));
    const auto& facts = table1_facts()[r.type.row - 1];
    CHECK(r.profile.extension_property == facts.extension_property);
    CHECK(r.profile.ann_dim == facts.ann_dim);
    CHECK(r.profile.pd2ei == facts.pd2ei);
  }
  CHECK(rows.size() == 7);
}

TEST_CASE("dim-1 reductions from the case tree") {
  // e1^2 = e1 + e2 + e3, c1 = c2 = 0 (Case 1.2.1) -> [[1,0,0],0,0]
  Mat3<Rational> m = rat3({1, 0, 0, 1, 0, 0, 1, 0, 0});
  auto r = classify(m);
  CHECK(r.type.row == 5);
  CHECK(mat_eq<Rational, 3, 3>(r.type.canonical_matrix,
                               rat3({1, 0, 0, 0, 0, 0, 0, 0, 0})));
  // omega_1 = 0, omega_2 != 0, c1 != 0 routes through the cyclic permutation
  // to Case 1: e1^2 = e2, e2^2 = e1^2, e3^2 = 0
  Mat3<Rational> m2 = rat3({0, 0, 0, 1, 1, 0, 0, 0, 0});
  auto r2 = classify(m2);
  CHECK(r2.type.dim_class == 1);
  check_result(m2, r2);
  // rational backend needs sqrt(c2): unavailable for c2 = 2
  Mat3<Rational> needs_root = rat3({0, 1, 2, 0, 0, 0, 0, 0, 0});
  CHECK_THROWS_AS(classify(needs_root), RootUnavailable);
  // same matrix over C classifies to row 6
  Mat3<Cx> wr = cx3({"0", "1", "2", "0", "0", "0", "0", "0", "0"});
  auto rc = classify(wr);
  CHECK(rc.type.row == 6);
}

TEST_CASE("extension property criterion") {
  CHECK_FALSE(extension_property(rat3({1, -1, 1, 1, -1, 1, 0, 0, 0})));
  CHECK(extension_property(rat3({1, 1, 1, 0, 0, 0, 0, 0, 0})));
  CHECK(extension_property(rat3({0, 0, 1, 0, 0, 0, 0, 0, 0})));
  CHECK_THROWS_AS(extension_property(rat3({1, 0, 0, 0, 1, 0, 0, 0, 1})),
                  WrongDimensionClass);
}

TEST_CASE("pd2ei witnesses") {
  auto [p1, g1] = has_pd2ei(rat3({1, -1, 1, 1, -1, 1, 0, 0, 0}));
  CHECK(p1);
  REQUIRE(g1.has_value());
  CHECK((*g1)(2) == Rational(1));
  auto [p2, g2] = has_pd2ei(rat3({1, -1, 0, 1, -1, 0, 0, 0, 0}));
  CHECK(p2);
  REQUIRE(g2.has_value());
  CHECK((*g2)(0) == Rational(1));
  auto [p3, g3] = has_pd2ei(rat3({1, 1, 1, 0, 0, 0, 0, 0, 0}));
  CHECK_FALSE(p3);
}

TEST_CASE("dim-3 canonical forms") {
  auto r = classify(rat3({1, 0, 0, 0, 1, 0, 0, 0, 1}));
  CHECK(r.type.dim_class == 3);
  CHECK(r.type.table == "T18");
  CHECK(mat_eq<Rational, 3, 3>(r.type.canonical_matrix,
                               rat3({1, 0, 0, 0, 1, 0, 0, 0, 1})));
  // cyclic pattern with arbitrary nonzero entries -> the cyclic 0/1 matrix
  Mat3<Cx> cyc = cx3({"0", "1.3+0.4i", "0", "0", "0", "0.8-0.2i",
                      "1.9+0.7i", "0", "0"});
  auto rc = classify(cyc);
  CHECK(rc.type.table == "T18");
  Mat3<Cx> want = cx3({"0", "0", "1", "1", "0", "0", "0", "1", "0"});
  CHECK(mat_eq<Cx, 3, 3>(rc.type.canonical_matrix, want));
  CHECK(rc.type.row == 3);
  check_result(cyc, rc);
  // the three 3-nonzero orbits are distinct
  auto t1 = classify(cx3({"1", "0", "0", "0", "1", "0", "0", "0", "1"}));
  auto t2 = classify(cx3({"0", "1", "0", "1", "0", "0", "0", "0", "1"}));
  auto t3 = classify(cx3({"0", "1", "0", "0", "0", "1", "1", "0", "0"}));
  CHECK_FALSE(same_type(t1.type, t2.type));
  CHECK_FALSE(same_type(t1.type, t3.type));
  CHECK_FALSE(same_type(t2.type, t3.type));
}

TEST_CASE("Table 19' identification collapses to one type") {
  Cx mu(0.9, 0.5);
  Cx phi14 = std::polar(1.0, 3.14159265358979323846 / 7.0);
  Mat3<Cx> a;
  a << mu, Cx(0.0), Cx(1.0), Cx(1.0), Cx(0.0), Cx(0.0), Cx(0.0), Cx(1.0), Cx(0.0);
  Mat3<Cx> b = a;
  b(0, 0) = -phi14 * mu;
  auto ra = classify(a);
  auto rb = classify(b);
  CHECK(ra.type.table == "T19");
  CHECK(same_type(ra.type, rb.type));
}

TEST_CASE("dim-2 group-regime identifications (Table 2')") {
  Mat3<Cx> a = cx3({"0", "0", "0", "1", "1", "0", "1", "0", "4"});
  Mat3<Cx> b = cx3({"0", "0", "0", "1", "1", "0", "1", "0", "0.25"});
  auto ra = classify(a);
  auto rb = classify(b);
  CHECK(ra.type.dim_class == 2);
  CHECK(ra.type.table == "T2");
  CHECK(same_type(ra.type, rb.type));
  Mat3<Cx> c = cx3({"0", "0", "0", "0", "1", "1", "1", "0", "4"});
  Mat3<Cx> cm = cx3({"0", "0", "0", "0", "1", "1", "1", "0", "-4"});
  CHECK(same_type(classify(c).type, classify(cm).type));
}

TEST_CASE("set-S regime reductions from the proof") {
  // [[1,0,0],[0,1,1],[0,a,a]] with a^2+1 != 0 collapses to the all-ones cell
  Mat3<Cx> m = cx3({"1", "0", "0", "0", "1", "1", "0", "0.7+0.2i", "0.7+0.2i"});
  auto r = classify(m);
  CHECK(r.type.table == "T9");
  Mat3<Cx> want = cx3({"1", "0", "0", "0", "1", "1", "0", "1", "1"});
  CHECK(mat_eq<Cx, 3, 3>(r.type.canonical_matrix, want));
  check_result(m, r);
  // the same family at a = i stays on the branch cell
  Mat3<Cx> mi = cx3({"1", "0", "0", "0", "1", "1", "0", "i", "i"});
  auto ri = classify(mi);
  CHECK(ri.type.table == "T9");
  CHECK_FALSE(same_type(r.type, ri.type));
  // Table 10' row 1: alpha and 1/alpha give the same type
  Mat3<Cx> x = cx3({"0", "0", "0", "1", "1", "1", "5", "1", "1"});
  Mat3<Cx> y = cx3({"0", "0", "0", "1", "1", "1", "0.2", "1", "1"});
  CHECK(same_type(classify(x).type, classify(y).type));
}

TEST_CASE("annihilator-1 regime (Tables 14-17)") {
  auto r = classify(rat3({1, 0, 0, 0, 1, 0, 0, 0, 0}));
  CHECK(r.type.table == "T15");
  CHECK(r.type.row == 1);
  CHECK(mat_eq<Rational, 3, 3>(r.type.canonical_matrix,
                               rat3({1, 0, 0, 0, 1, 0, 0, 0, 0})));
  // a generic matrix with zero column and full 2x2 block clears its third row
  Mat3<Rational> m = rat3({1, 1, 0, 2, 3, 0, 4, 5, 0});
  auto rm = classify(m);
  CHECK(rm.type.dim_class == 2);
  CHECK(rm.profile.ann_dim == 1);
  check_result(m, rm);
  // Table 14 row 1 shape
  Mat3<Rational> t14 = rat3({5, 0, 0, 0, 0, 0, 0, 7, 0});
  auto r14 = classify(t14);
  CHECK(r14.type.table == "T14");
  check_result(t14, r14);
}

TEST_CASE("classification is invariant under the group action (fuzz)") {
  int done = 0;
  while (done < 60) {
    Mat3<Cx> m;
    std::uniform_real_distribution<double> d(-1.4, 1.4);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = (rng()() % 3 == 0) ? Cx(0.0) : Cx(d(rng()), d(rng()));
    GroupElement<Cx> g = rnd_elem();
    Mat3<Cx> n = act(g, m);
    try {
      auto rm = classify(m);
      auto rn = classify(n);
      INFO("type1 ", rm.type.family_id(), " type2 ", rn.type.family_id());
      CHECK(same_type(rm.type, rn.type));
      ++done;
    } catch (const RootUnavailable&) {
      continue;
    }
  }
}

TEST_CASE("idempotence and witness soundness (fuzz per class)") {
  std::uniform_real_distribution<double> d(-1.4, 1.4);
  int checked = 0;
  for (int t = 0; t < 400 && checked < 120; ++t) {
    Mat3<Cx> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = (rng()() % 3 == 0) ? Cx(0.0) : Cx(d(rng()), d(rng()));
    try {
      auto r = classify(m);
      check_result(m, r);
      ++checked;
    } catch (const RootUnavailable&) {
    }
  }
  CHECK(checked >= 100);
}

TEST_CASE("dim-1 Case with c1 = 0, c2 != 0 lands on row 4") {
  // e1^2 = e1 + e2, e2^2 = 0, e3^2 = 4 e1^2 (exact square: stays rational)
  Mat3<Rational> m = rat3({1, 0, 4, 1, 0, 4, 0, 0, 0});
  auto r = classify(m);
  CHECK(r.type.table == "T1");
  CHECK(r.type.row == 4);
  CHECK(mat_eq<Rational, 3, 3>(r.type.canonical_matrix,
                               rat3({1, 0, 1, 0, 0, 0, 0, 0, 0})));
  CHECK(mat_eq<Rational, 3, 3>(transform(m, r.witness), r.type.canonical_matrix));
}

TEST_CASE("profile of the canonical form matches the input (per regime)") {
  std::uniform_real_distribution<double> d(-1.4, 1.4);
  int done = 0;
  while (done < 80) {
    Mat3<Cx> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = (rng()() % 3 == 0) ? Cx(0.0) : Cx(d(rng()), d(rng()));
    try {
      auto r = classify(m);
      InvariantProfile pm = invariant_profile(m);
      InvariantProfile pc = invariant_profile(r.type.canonical_matrix);
      CHECK(pm.dim_square == pc.dim_square);
      CHECK(pm.ann_dim == pc.ann_dim);
      if (pm.dim_square == 1) {
        CHECK(pm.extension_property == pc.extension_property);
        CHECK(pm.pd2ei == pc.pd2ei);
      }
      if (pm.dim_square == 2) CHECK(pm.property_2li == pc.property_2li);
      bool group_regime = pm.dim_square == 3 ||
                          (pm.dim_square == 2 && pm.property_2li.value_or(false));
      if (group_regime) {
        CHECK(pm.zero_count == pc.zero_count);
        CHECK(pm.diag_zero_count == pc.diag_zero_count);
      }
      ++done;
    } catch (const RootUnavailable&) {
    }
  }
}

TEST_CASE("every family instantiation classifies back to its own row") {
  // the +-sqrt(-1) sibling cells canonicalize to the first sibling
  std::map<std::string, std::string> merge = {
      {"T8.3", "T8.2"},   {"T9.3", "T9.2"},   {"T9.6", "T9.5"},
      {"T10.3", "T10.2"}, {"T11.3", "T11.2"}, {"T11.6", "T11.5"},
      {"T12.3", "T12.2"}, {"T13.3", "T13.2"}};
  std::uniform_real_distribution<double> re(0.35, 1.9), im(-1.1, 1.1);
  int checked = 0;
  for (const auto& f : families()) {
    for (int s = 0; s < 2; ++s) {
      std::map<std::string, Cx> p;
      for (const auto& n : f.params) p[n] = Cx(re(rng()), im(rng()));
      Mat3<Cx> m;
      try {
        m = instantiate<Cx>(f, p);
      } catch (const ConstraintViolated&) {
        continue;
      }
      ++checked;
      auto r = classify(m);
      std::string want = merge.count(f.id) ? merge.at(f.id) : f.id;
      INFO(f.id, " -> ", r.type.family_id());
      CHECK(r.type.family_id() == want);
    }
  }
  CHECK(checked > 180);
}

TEST_CASE("classification of independent matrices runs concurrently") {
  std::uniform_real_distribution<double> d(-1.4, 1.4);
  std::vector<Mat3<Cx>> inputs;
  while (inputs.size() < 60) {
    Mat3<Cx> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        m(i, j) = (rng()() % 3 == 0) ? Cx(0.0) : Cx(d(rng()), d(rng()));
    inputs.push_back(m);
  }
  std::vector<std::string> serial(inputs.size());
  for (size_t k = 0; k < inputs.size(); ++k)
    serial[k] = classify(inputs[k]).type.family_id();

  std::vector<std::string> parallel(inputs.size());
  std::vector<std::thread> workers;
  for (int w = 0; w < 4; ++w)
    workers.emplace_back([&, w] {
      for (size_t k = w; k < inputs.size(); k += 4)
        parallel[k] = classify(inputs[k]).type.family_id();
    });
  for (auto& t : workers) t.join();
  CHECK(parallel == serial);
}
