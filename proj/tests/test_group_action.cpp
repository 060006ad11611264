#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "evo3/group_action.hpp"
#include "evo3/scalar_expr.hpp"

using namespace evo3;

namespace {

Mat3<Cx> cmat(std::initializer_list<const char*> cells) {
  Mat3<Cx> m;
  auto it = cells.begin();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) m(i, j) = parse_scalar<Cx>(*it++);
  return m;
}

std::mt19937& rng() {
  static std::mt19937 r(51);
  return r;
}

Cx rnd_nonzero() {
  std::uniform_real_distribution<double> d(0.2, 1.6);
  return Cx(d(rng()), d(rng()));
}

GroupElement<Cx> rnd_elem() {
  GroupElement<Cx> g{all_perms()[rng()() % 6],
                     {rnd_nonzero(), rnd_nonzero(), rnd_nonzero()}};
  return g;
}

Mat3<Cx> rnd_mat() {
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  Mat3<Cx> m;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      m(i, j) = (rng()() % 4 == 0) ? Cx(0.0) : Cx(d(rng()), d(rng()));
  return m;
}

}  // namespace

TEST_CASE("permutation action relabels rows and columns") {
  Mat3<Cx> m = cmat({"0", "0", "0", "0", "1", "1", "1", "0", "3"});
  CHECK(mat_eq<Cx, 3, 3>(act_permutation(Perm::identity(), m), m));
  // Table 2 row 1, column (1,2)
  Mat3<Cx> want = cmat({"1", "0", "1", "0", "0", "0", "0", "1", "3"});
  CHECK(mat_eq<Cx, 3, 3>(act_permutation(Perm{{2, 1, 3}}, m), want));
  // a 3-cycle fixes the identity matrix
  Mat3<Cx> id = cmat({"1", "0", "0", "0", "1", "0", "0", "0", "1"});
  CHECK(mat_eq<Cx, 3, 3>(act_permutation(Perm{{2, 3, 1}}, id), id));
}

TEST_CASE("diagonal action matches the closed form") {
  Mat3<Cx> m = rnd_mat();
  std::array<Cx, 3> ones{Cx(1.0), Cx(1.0), Cx(1.0)};
  CHECK(mat_eq<Cx, 3, 3>(act_diagonal(ones, m), m));
  CHECK_THROWS_AS(act_diagonal({Cx(0.0), Cx(1.0), Cx(1.0)}, m), ZeroScalar);

  // normalizing the cyclic pattern to the 0/1 permutation matrix needs the
  // 7th root from the proof of the three-nonzero case
  Cx w12(1.3, 0.4), w23(0.8, -0.2), w31(1.9, 0.7);
  Mat3<Cx> cyc = Mat3<Cx>::Constant(Cx(0.0));
  cyc(0, 1) = w12;
  cyc(1, 2) = w23;
  cyc(2, 0) = w31;
  Cx alpha = Cx(1.0) / nth_root(w12 * pow_int(w23, 2) * pow_int(w31, 4), 7);
  Cx beta = pow_int(alpha, 4) * w23 * pow_int(w31, 2);
  Cx gamma = pow_int(alpha, 2) * w31;
  Mat3<Cx> got = act_diagonal({alpha, beta, gamma}, cyc);
  Mat3<Cx> want = Mat3<Cx>::Constant(Cx(0.0));
  want(0, 1) = Cx(1.0);
  want(1, 2) = Cx(1.0);
  want(2, 0) = Cx(1.0);
  CHECK(mat_eq<Cx, 3, 3>(got, want));
}

TEST_CASE("act agrees with transform for every sampled element") {
  for (int t = 0; t < 400; ++t) {
    GroupElement<Cx> g = rnd_elem();
    Mat3<Cx> m = rnd_mat();
    CHECK(is_natural_change(m, g.matrix()));
    CHECK(mat_eq<Cx, 3, 3>(act(g, m), transform(m, g.matrix())));
  }
}

TEST_CASE("zero profile is invariant under the action") {
  for (int t = 0; t < 500; ++t) {
    GroupElement<Cx> g = rnd_elem();
    Mat3<Cx> m = rnd_mat();
    CHECK(zero_profile(act(g, m)) == zero_profile(m));
  }
}

TEST_CASE("compose and inverse") {
  Mat3<Cx> m = rnd_mat();
  GroupElement<Cx> id = GroupElement<Cx>::identity();
  GroupElement<Cx> g = rnd_elem();
  CHECK(mat_eq<Cx, 3, 3>(act(id, m), m));
  CHECK(mat_eq<Cx, 3, 3>(act(compose(g, id), m), act(g, m)));

  // two diagonal elements compose componentwise
  GroupElement<Cx> d1{Perm::identity(), {Cx(2.0), Cx(3.0), Cx(5.0)}};
  GroupElement<Cx> d2{Perm::identity(), {Cx(7.0), Cx(11.0), Cx(13.0)}};
  GroupElement<Cx> d12 = compose(d1, d2);
  CHECK(d12.sigma.is_identity());
  CHECK(approx_eq(d12.scalars[0], Cx(14.0)));
  CHECK(approx_eq(d12.scalars[1], Cx(33.0)));
  CHECK(approx_eq(d12.scalars[2], Cx(65.0)));

  // a transposition with unit scalars squares to the identity
  GroupElement<Cx> s{Perm{{2, 1, 3}}, {Cx(1.0), Cx(1.0), Cx(1.0)}};
  GroupElement<Cx> s2 = compose(s, s);
  CHECK(s2.sigma.is_identity());
  for (auto& v : s2.scalars) CHECK(approx_eq(v, Cx(1.0)));

  for (int t = 0; t < 200; ++t) {
    GroupElement<Cx> a = rnd_elem(), b = rnd_elem();
    Mat3<Cx> x = rnd_mat();
    CHECK(mat_eq<Cx, 3, 3>(act(compose(a, b), x), act(a, act(b, x))));
    CHECK(mat_eq<Cx, 3, 3>(act(a, act(inverse(a), x)), x));
  }
}

TEST_CASE("monomial matrices are always natural changes") {
  for (int t = 0; t < 200; ++t) {
    GroupElement<Cx> g = rnd_elem();
    Mat3<Cx> m = rnd_mat();
    CHECK(is_natural_change(m, g.matrix()));
  }
}

TEST_CASE("Property (2LI) is invariant under the action") {
  int evaluated = 0;
  while (evaluated < 200) {
    Mat3<Cx> m = rnd_mat();
    GroupElement<Cx> g = rnd_elem();
    bool a = property_2li(m);
    bool b = property_2li(act(g, m));
    CHECK(a == b);
    ++evaluated;
  }
}

TEST_CASE("diagonal action on the identity matrix") {
  Mat3<Cx> id = cmat({"1", "0", "0", "0", "1", "0", "0", "0", "1"});
  Cx alpha(1.7, 0.4);
  Mat3<Cx> got = act_diagonal({alpha, Cx(1.0), Cx(1.0)}, id);
  Mat3<Cx> want = id;
  want(0, 0) = alpha;
  CHECK(mat_eq<Cx, 3, 3>(got, want));
}
