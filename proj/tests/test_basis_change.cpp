#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "evo3/basis_change.hpp"
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

Mat3<Cx> identity() {
  return cmat({"1", "0", "0", "0", "1", "0", "0", "0", "1"});
}

}  // namespace

TEST_CASE("star product columns") {
  MatX<Cx> s = star_product(identity());
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(is_zero(s(i, j)));
  Mat3<Cx> ones = cmat({"1", "1", "1", "1", "1", "1", "1", "1", "1"});
  s = star_product(ones);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(approx_eq(s(i, j), Cx(1.0)));
  Mat3<Cx> diag = cmat({"2", "0", "0", "0", "3", "0", "0", "0", "5"});
  s = star_product(diag);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(is_zero(s(i, j)));
  // column order (1,2), (1,3), (2,3)
  Mat3<Cx> p = cmat({"1", "2", "3", "0", "0", "0", "0", "0", "0"});
  s = star_product(p);
  CHECK(approx_eq(s(0, 0), Cx(2.0)));
  CHECK(approx_eq(s(0, 1), Cx(3.0)));
  CHECK(approx_eq(s(0, 2), Cx(6.0)));
}

TEST_CASE("is_natural_change criterion") {
  Mat3<Cx> m = cmat({"0", "0", "0", "0", "1", "1", "1", "0", "3"});
  CHECK(is_natural_change(m, identity()));
  // diag(sqrt(-1), 1, -1) is a valid change for the Table 2 row 1 family
  Mat3<Cx> p = cmat({"i", "0", "0", "0", "1", "0", "0", "0", "-1"});
  CHECK(is_natural_change(m, p));
  // two identical columns: singular, not a change of basis
  Mat3<Cx> sing = cmat({"1", "1", "0", "2", "2", "0", "0", "0", "1"});
  CHECK_FALSE(is_natural_change(m, sing));
}

TEST_CASE("transform reproduces the primed-table rows") {
  Mat3<Cx> m = cmat({"0", "0", "0", "0", "1", "1", "1", "0", "3"});
  Mat3<Cx> p = cmat({"i", "0", "0", "0", "1", "0", "0", "0", "-1"});
  Mat3<Cx> want = cmat({"0", "0", "0", "0", "1", "1", "1", "0", "-3"});
  CHECK(mat_eq<Cx, 3, 3>(transform(m, p), want));
  CHECK(mat_eq<Cx, 3, 3>(transform(m, identity()), m));

  // Table 19' row 1: with phi a primitive 14th root of unity,
  // diag(-phi, phi^2, phi^4) rescales mu by -phi and fixes the three 1s.
  Cx mu(0.7, 0.4);
  Cx phi = std::polar(1.0, 3.14159265358979323846 / 7.0);
  Mat3<Cx> m19;
  m19 << mu, Cx(0.0), Cx(1.0), Cx(1.0), Cx(0.0), Cx(0.0), Cx(0.0), Cx(1.0), Cx(0.0);
  Mat3<Cx> p19 = Mat3<Cx>::Constant(Cx(0.0));
  p19(0, 0) = -phi;
  p19(1, 1) = pow_int(phi, 2);
  p19(2, 2) = pow_int(phi, 4);
  Mat3<Cx> got = transform(m19, p19);
  Mat3<Cx> want19 = m19;
  want19(0, 0) = -phi * mu;
  CHECK(mat_eq<Cx, 3, 3>(got, want19));
}

TEST_CASE("transform requires a natural change") {
  Mat3<Cx> m = cmat({"1", "0", "0", "0", "1", "0", "0", "0", "1"});
  Mat3<Cx> p = cmat({"1", "1", "0", "0", "1", "0", "0", "0", "1"});  // not natural for id
  CHECK_FALSE(is_natural_change(m, p));
  CHECK_THROWS_AS(transform(m, p), NotANaturalChange);
}

TEST_CASE("round trip and rank preservation over the group") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> d(-1.5, 1.5);
  auto rnd = [&] { return Cx(d(rng), d(rng)); };
  for (int t = 0; t < 300; ++t) {
    Mat3<Cx> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rnd();
    GroupElement<Cx> g{all_perms()[rng() % 6], {}};
    for (auto& s : g.scalars)
      do { s = rnd(); } while (is_zero(s));
    Mat3<Cx> p = g.matrix();
    REQUIRE(is_natural_change(m, p));
    Mat3<Cx> n = transform(m, p);
    Mat3<Cx> back = transform(n, inverse3(p));
    CHECK(mat_eq<Cx, 3, 3>(back, m));
    CHECK(rank3(n) == rank3(m));
  }
}

TEST_CASE("composition matches matrix product on group elements") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> d(0.2, 1.5);
  auto rnd = [&] { return Cx(d(rng), d(rng)); };
  for (int t = 0; t < 100; ++t) {
    Mat3<Cx> m;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m(i, j) = rnd();
    GroupElement<Cx> g{all_perms()[rng() % 6], {rnd(), rnd(), rnd()}};
    GroupElement<Cx> h{all_perms()[rng() % 6], {rnd(), rnd(), rnd()}};
    Mat3<Cx> lhs = transform(transform(m, g.matrix(), true), h.matrix(), true);
    Mat3<Cx> rhs = transform(m, Mat3<Cx>(g.matrix() * h.matrix()), true);
    CHECK(mat_eq<Cx, 3, 3>(lhs, rhs));
  }
}
