// Newton refinement of an approximate basis-change witness: solves
// M P^(2) = P C for P, starting from a witness computed through an
// ill-conditioned reduction. Floating backend only; exact backends have
// nothing to polish.
#ifndef EVO3_NEWTON_HPP
#define EVO3_NEWTON_HPP

#include <Eigen/Dense>

#include "evo3/basis_change.hpp"

namespace evo3 {

/// One residual: F(P) = M P^(2) - P C (zero iff transform(M, P) = C when P is
/// invertible). Refines p in place; returns true when the refined witness
/// verifies under the backend tolerance.
inline bool newton_polish_witness(const Mat3<Cx>& m, const Mat3<Cx>& c, Mat3<Cx>& p) {
  using V9 = Eigen::Matrix<Cx, 9, 1>;
  using M9 = Eigen::Matrix<Cx, 9, 9>;
  auto pack = [](const Mat3<Cx>& a) {
    V9 v;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) v(3 * i + j) = a(i, j);
    return v;
  };
  auto residual = [&](const Mat3<Cx>& q) {
    return Mat3<Cx>(m * entrywise_square(q) - q * c);
  };
  Mat3<Cx> q = p;
  for (int iter = 0; iter < 8; ++iter) {
    Mat3<Cx> f = residual(q);
    double fn = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) fn = std::max(fn, std::abs(f(i, j)));
    if (fn < 1e-14 * std::max(1.0, q.cwiseAbs().maxCoeff())) break;
    // Jacobian of F at q in the direction E_kl: M (2 q .* E_kl) - E_kl C
    M9 jac;
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) {
        Mat3<Cx> e = Mat3<Cx>::Constant(Cx(0.0));
        e(k, l) = Cx(1.0);
        Mat3<Cx> dq;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) dq(i, j) = 2.0 * q(i, j) * e(i, j);
        Mat3<Cx> df = Mat3<Cx>(m * dq - e * c);
        jac.col(3 * k + l) = pack(df);
      }
    Eigen::FullPivLU<M9> lu(jac);
    if (lu.rank() < 9) break;
    V9 step = lu.solve(pack(f));
    for (int k = 0; k < 3; ++k)
      for (int l = 0; l < 3; ++l) q(k, l) -= step(3 * k + l);
  }
  if (field_traits<Cx>::is_zero(det3(q))) return false;
  if (!is_natural_change(m, q)) return false;
  if (!mat_eq<Cx, 3, 3>(transform(m, q, true), c)) return false;
  p = q;
  return true;
}

inline bool newton_polish_witness(const Mat3<Rational>&, const Mat3<Rational>&,
                                  Mat3<Rational>&) {
  return false;  // exact arithmetic: the witness either verifies or it is wrong
}

}  // namespace evo3

#endif  // EVO3_NEWTON_HPP
