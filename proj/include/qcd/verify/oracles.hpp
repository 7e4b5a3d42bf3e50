#pragma once

// Reference computations that avoid the library's fast paths. Used by the tests and the
// acceptance suite to cross-check results.

#include <qcd/banded.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/quaternion.hpp>

#include <Eigen/Dense>

#include <cmath>

namespace qcd::oracle {

// Real 4x4 matrix of x -> a x in the basis (1, i, j, k).
inline Eigen::Matrix4d left_mul_matrix(const Quaternion& a) {
  Eigen::Matrix4d L;
  L << a.a0, -a.a1, -a.a2, -a.a3,
       a.a1,  a.a0, -a.a3,  a.a2,
       a.a2,  a.a3,  a.a0, -a.a1,
       a.a3, -a.a2,  a.a1,  a.a0;
  return L;
}

inline Quaternion product(const Quaternion& a, const Quaternion& b) {
  const Eigen::Vector4d v = left_mul_matrix(a) * Eigen::Vector4d(b.a0, b.a1, b.a2, b.a3);
  return {v(0), v(1), v(2), v(3)};
}

inline QMatrix matmul(const QMatrix& A, const QMatrix& B) {
  QMatrix C(A.rows(), B.cols());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < B.cols(); ++c) {
      Quaternion s;
      for (std::size_t k = 0; k < A.cols(); ++k) s += product(A(r, k), B(k, c));
      C(r, c) = s;
    }
  return C;
}

inline QVector matvec(const QMatrix& A, const QVector& x) {
  QVector y(A.rows());
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t k = 0; k < A.cols(); ++k) y[r] += product(A(r, k), x[k]);
  return y;
}

// (T - I s) x = T x - x s
inline QVector shifted_apply(const QMatrix& T, const Quaternion& s, const QVector& x) {
  QVector y = matvec(T, x);
  for (std::size_t r = 0; r < x.size(); ++r) y[r] -= product(x[r], s);
  return y;
}

// Pencil rows of a positive weighted shift solved for the next coordinate:
// w_{r+1} w_{r+2} x[r+2] = 2 Re(s) w_{r+1} x[r+1] - |s|^2 x[r].
inline QVector shift_kernel_recurrence(const WeightRule& w, const Quaternion& s, const Quaternion& x1,
                                       const Quaternion& x2, std::size_t N) {
  QVector x(N);
  if (N > 0) x[0] = x1;
  if (N > 1) x[1] = x2;
  const double tr = 2 * s.a0, n2 = s.norm_sq();
  for (std::size_t r = 0; r + 2 < N; ++r) {
    const double wa = w(r + 1).a0, wb = w(r + 2).a0;
    x[r + 2] = (x[r + 1] * (tr * wa) - x[r] * n2) / (wa * wb);
  }
  return x;
}

// (q, q s / w1, q s^2 / (w1 w2), ...)
inline QVector geometric_eigvec(const WeightRule& w, const Quaternion& s, const Quaternion& q, std::size_t N) {
  QVector x(N);
  Quaternion p = q;
  double wp = 1;
  for (std::size_t n = 0; n < N; ++n) {
    if (n > 0) {
      p = product(p, s);
      wp *= w(n).a0;
    }
    x[n] = p / wp;
  }
  return x;
}

// z1 + j z2 e^{2 i theta}
inline Quaternion ad_theta_rhs(const Quaternion& q, double theta) {
  return Quaternion::merge(q.z1(), q.z2() * std::polar(1.0, 2 * theta));
}

// e^{-i theta} q e^{i theta} by explicit products
inline Quaternion ad_theta_lhs(const Quaternion& q, double theta) {
  const Quaternion e(std::cos(theta), std::sin(theta), 0, 0);
  return product(product(conj(e), q), e);
}

inline double max_abs(const CMat& M) { return M.size() ? M.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace qcd::oracle
