#pragma once

#include <qcd/detail/dense.hpp>
#include <qcd/error.hpp>
#include <qcd/quaternion.hpp>

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace qcd {

using detail::CMat;
using detail::CVec;
using detail::cplx;
using ComplexRep = CMat;

class QVector {
 public:
  QVector() = default;
  explicit QVector(std::size_t n) : v_(n) {}
  QVector(std::initializer_list<Quaternion> xs) : v_(xs) {}
  explicit QVector(std::vector<Quaternion> xs) : v_(std::move(xs)) {}

  static QVector basis(std::size_t n, std::size_t k) {
    QVector e(n);
    e[k] = 1.0;
    return e;
  }

  std::size_t size() const { return v_.size(); }
  Quaternion& operator[](std::size_t i) { return v_[i]; }
  const Quaternion& operator[](std::size_t i) const { return v_[i]; }
  auto begin() const { return v_.begin(); }
  auto end() const { return v_.end(); }
  const std::vector<Quaternion>& entries() const { return v_; }

  double norm_sq() const {
    double s = 0;
    for (const auto& q : v_) s += q.norm_sq();
    return s;
  }
  double norm() const { return std::sqrt(norm_sq()); }

  QVector& operator+=(const QVector& o) {
    check(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
    return *this;
  }
  QVector& operator-=(const QVector& o) {
    check(o);
    for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
    return *this;
  }
  QVector& operator*=(double s) {
    for (auto& q : v_) q *= s;
    return *this;
  }
  friend QVector operator+(QVector a, const QVector& b) { return a += b; }
  friend QVector operator-(QVector a, const QVector& b) { return a -= b; }
  friend QVector operator*(QVector a, double s) { return a *= s; }
  friend QVector operator*(double s, QVector a) { return a *= s; }
  // Right scalar action x*q.
  friend QVector operator*(QVector a, const Quaternion& q) {
    for (auto& x : a.v_) x = x * q;
    return a;
  }
  friend bool operator==(const QVector&, const QVector&) = default;

 private:
  void check(const QVector& o) const {
    if (o.size() != size()) throw error(errc::dimension_mismatch, "vector lengths differ");
  }
  std::vector<Quaternion> v_;
};

class QMatrix {
 public:
  QMatrix() = default;
  QMatrix(std::size_t rows, std::size_t cols) : r_(rows), c_(cols), a_(rows * cols) {}
  QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) {
    r_ = rows.size();
    c_ = r_ ? rows.begin()->size() : 0;
    a_.reserve(r_ * c_);
    for (const auto& row : rows) {
      if (row.size() != c_) throw error(errc::dimension_mismatch, "ragged matrix literal");
      a_.insert(a_.end(), row.begin(), row.end());
    }
  }

  static QMatrix identity(std::size_t n) {
    QMatrix I(n, n);
    for (std::size_t i = 0; i < n; ++i) I(i, i) = 1.0;
    return I;
  }
  static QMatrix diagonal(const std::vector<Quaternion>& d) {
    QMatrix D(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) D(i, i) = d[i];
    return D;
  }
  static QMatrix from_columns(const std::vector<QVector>& cols) {
    const std::size_t n = cols.empty() ? 0 : cols.front().size();
    QMatrix M(n, cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (cols[c].size() != n) throw error(errc::dimension_mismatch, "column lengths differ");
      for (std::size_t r = 0; r < n; ++r) M(r, c) = cols[c][r];
    }
    return M;
  }

  std::size_t rows() const { return r_; }
  std::size_t cols() const { return c_; }
  bool square() const { return r_ == c_; }
  Quaternion& operator()(std::size_t r, std::size_t c) { return a_[r * c_ + c]; }
  const Quaternion& operator()(std::size_t r, std::size_t c) const { return a_[r * c_ + c]; }

  QVector column(std::size_t c) const {
    QVector v(r_);
    for (std::size_t r = 0; r < r_; ++r) v[r] = (*this)(r, c);
    return v;
  }

  QMatrix adjoint() const {
    QMatrix B(c_, r_);
    for (std::size_t r = 0; r < r_; ++r)
      for (std::size_t c = 0; c < c_; ++c) B(c, r) = conj((*this)(r, c));
    return B;
  }

  QMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    QMatrix B(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) B(r, c) = (*this)(r0 + r, c0 + c);
    return B;
  }

  // Max-entry modulus.
  double max_abs() const {
    double m = 0;
    for (const auto& q : a_) m = std::max(m, q.abs());
    return m;
  }

  QMatrix& operator+=(const QMatrix& o) {
    same_shape(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }
  QMatrix& operator-=(const QMatrix& o) {
    same_shape(o);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }
  QMatrix& operator*=(double s) {
    for (auto& q : a_) q *= s;
    return *this;
  }
  friend QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
  friend QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
  friend QMatrix operator*(QMatrix a, double s) { return a *= s; }
  friend QMatrix operator*(double s, QMatrix a) { return a *= s; }

  friend QMatrix operator*(const QMatrix& A, const QMatrix& B) {
    if (A.c_ != B.r_) throw error(errc::dimension_mismatch, "matrix product shapes");
    QMatrix C(A.r_, B.c_);
    for (std::size_t i = 0; i < A.r_; ++i)
      for (std::size_t k = 0; k < A.c_; ++k) {
        const Quaternion& a = A(i, k);
        if (a == Quaternion()) continue;
        for (std::size_t j = 0; j < B.c_; ++j) C(i, j) += a * B(k, j);
      }
    return C;
  }

  friend QVector operator*(const QMatrix& A, const QVector& x) {
    if (A.c_ != x.size()) throw error(errc::dimension_mismatch, "matrix-vector shapes");
    QVector y(A.r_);
    for (std::size_t i = 0; i < A.r_; ++i) {
      Quaternion s;
      for (std::size_t k = 0; k < A.c_; ++k) s += A(i, k) * x[k];
      y[i] = s;
    }
    return y;
  }

  friend bool operator==(const QMatrix&, const QMatrix&) = default;

 private:
  void same_shape(const QMatrix& o) const {
    if (o.r_ != r_ || o.c_ != c_) throw error(errc::dimension_mismatch, "matrix shapes differ");
  }
  std::size_t r_ = 0, c_ = 0;
  std::vector<Quaternion> a_;
};

// A*(lambda I): every entry multiplied by lambda on the right.
inline QMatrix times_scalar_right(QMatrix A, const Quaternion& lambda) {
  for (std::size_t r = 0; r < A.rows(); ++r)
    for (std::size_t c = 0; c < A.cols(); ++c) A(r, c) = A(r, c) * lambda;
  return A;
}

// <x, y> = sum conj(y_n) x_n
inline Quaternion inner(const QVector& x, const QVector& y) {
  if (x.size() != y.size()) throw error(errc::dimension_mismatch, "inner product lengths differ");
  Quaternion s;
  for (std::size_t n = 0; n < x.size(); ++n) s += conj(y[n]) * x[n];
  return s;
}

inline double norm(const QVector& x) { return x.norm(); }

// ---- complex representation ----------------------------------------------

inline CMat to_complex(const QMatrix& A) {
  const auto n = static_cast<Eigen::Index>(A.rows());
  const auto m = static_cast<Eigen::Index>(A.cols());
  CMat M(2 * n, 2 * m);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const Quaternion& q = A(r, c);
      const cplx z1 = q.z1(), z2 = q.z2();
      M(r, c) = z1;
      M(r, m + c) = -std::conj(z2);
      M(n + r, c) = z2;
      M(n + r, m + c) = std::conj(z1);
    }
  return M;
}

inline CVec to_complex(const QVector& x) {
  const auto n = static_cast<Eigen::Index>(x.size());
  CVec v(2 * n);
  for (Eigen::Index r = 0; r < n; ++r) {
    v(r) = x[r].z1();
    v(n + r) = x[r].z2();
  }
  return v;
}

// Inverse of to_complex; throws when the block pattern is violated beyond tol
// (relative to the largest entry).
inline QMatrix from_complex(const CMat& M, double tol = 1e-12) {
  if (M.rows() % 2 || M.cols() % 2)
    throw error(errc::not_a_quaternionic_rep, "odd complex dimensions");
  const Eigen::Index n = M.rows() / 2, m = M.cols() / 2;
  const double scale = std::max(1.0, M.size() ? M.cwiseAbs().maxCoeff() : 0.0);
  QMatrix A(n, m);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const cplx z1 = M(r, c), z2 = M(n + r, c);
      const double dev = std::max(std::abs(M(n + r, m + c) - std::conj(z1)),
                                  std::abs(M(r, m + c) + std::conj(z2)));
      if (dev > tol * scale)
        throw error(errc::not_a_quaternionic_rep, "block pattern violated");
      A(r, c) = Quaternion::merge(z1, z2);
    }
  return A;
}

// Orthogonal projection onto the block pattern; dev receives the largest pattern violation.
inline QMatrix nearest_quaternionic(const CMat& M, double* dev = nullptr) {
  if (M.rows() % 2 || M.cols() % 2)
    throw error(errc::not_a_quaternionic_rep, "odd complex dimensions");
  const Eigen::Index n = M.rows() / 2, m = M.cols() / 2;
  QMatrix A(n, m);
  double d = 0;
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < m; ++c) {
      const cplx z1 = 0.5 * (M(r, c) + std::conj(M(n + r, m + c)));
      const cplx z2 = 0.5 * (M(n + r, c) - std::conj(M(r, m + c)));
      d = std::max({d, std::abs(M(r, c) - z1), std::abs(M(n + r, c) - z2)});
      A(r, c) = Quaternion::merge(z1, z2);
    }
  if (dev) *dev = d;
  return A;
}

inline QVector from_complex_vector(const CVec& v) {
  if (v.size() % 2) throw error(errc::not_a_quaternionic_rep, "odd complex vector length");
  const Eigen::Index n = v.size() / 2;
  QVector x(static_cast<std::size_t>(n));
  for (Eigen::Index r = 0; r < n; ++r) x[r] = Quaternion::merge(v(r), v(n + r));
  return x;
}

// (x j)_C = J conj(x_C) with J = [[0, -I], [I, 0]]; applied columnwise.
inline CMat j_partner(const CMat& X) {
  const Eigen::Index n = X.rows() / 2;
  CMat Y(X.rows(), X.cols());
  Y.topRows(n) = -X.bottomRows(n).conjugate();
  Y.bottomRows(n) = X.topRows(n).conjugate();
  return Y;
}

// Complex-rep columns of a list of quaternionic vectors: [x_C ..., (x j)_C ...].
inline CMat complex_span_columns(const std::vector<QVector>& xs) {
  if (xs.empty()) return CMat(0, 0);
  const auto n = static_cast<Eigen::Index>(xs.front().size());
  const auto k = static_cast<Eigen::Index>(xs.size());
  CMat X(2 * n, k);
  for (Eigen::Index c = 0; c < k; ++c) X.col(c) = to_complex(xs[c]);
  CMat out(2 * n, 2 * k);
  out.leftCols(k) = X;
  out.rightCols(k) = j_partner(X);
  return out;
}

// Right-linear rank over H (half the complex rank of the columns and their j partners).
inline std::size_t h_rank(const std::vector<QVector>& xs, double rel_tol = 1e-8) {
  if (xs.empty()) return 0;
  return static_cast<std::size_t>(detail::svd(complex_span_columns(xs), false).rank(rel_tol) / 2);
}

// ---- Gram-Schmidt ------------------------------------------------------------

// e_i proportional to v_i - sum_{k<i} e_k <v_i, e_k>; one re-orthogonalization pass.
inline std::vector<QVector> gram_schmidt_q(const std::vector<QVector>& v, double tol = 1e-8) {
  if (v.empty()) return {};
  for (const auto& x : v)
    if (x.size() != v.front().size()) throw error(errc::dimension_mismatch, "vector lengths differ");
  if (h_rank(v, tol) != v.size())
    throw error(errc::dependent_input, "inputs are not right-linearly independent over H");
  std::vector<QVector> e;
  e.reserve(v.size());
  for (const auto& vi : v) {
    QVector r = vi;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& ek : e) r -= ek * inner(r, ek);
    const double nr = r.norm();
    if (nr < tol * std::max(vi.norm(), 1e-300))
      throw error(errc::dependent_input, "Gram-Schmidt residual vanished");
    e.push_back(r * (1.0 / nr));
  }
  return e;
}

// ---- random fixtures -----------------------------------------------------------

inline Quaternion random_quaternion(std::mt19937_64& rng, double scale = 1.0) {
  std::normal_distribution<double> g(0.0, scale);
  const double a = g(rng), b = g(rng), c = g(rng), d = g(rng);
  return {a, b, c, d};
}

inline Quaternion random_unit_quaternion(std::mt19937_64& rng) {
  Quaternion q;
  do q = random_quaternion(rng);
  while (q.abs() < 1e-6);
  return q / q.abs();
}

inline QVector random_qvector(std::size_t n, std::mt19937_64& rng, double scale = 1.0) {
  QVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = random_quaternion(rng, scale);
  return x;
}

inline QMatrix random_qmatrix(std::size_t r, std::size_t c, std::mt19937_64& rng,
                              double scale = 1.0) {
  QMatrix A(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) A(i, j) = random_quaternion(rng, scale);
  return A;
}

// Product of n Householder reflections I - 2 v v^* and a diagonal of unit quaternions.
inline QMatrix householder_random_unitary(std::size_t n, std::uint64_t seed) {
  if (n == 0) throw error(errc::invalid_argument, "householder_random_unitary needs n >= 1");
  std::mt19937_64 rng(seed);
  QMatrix U = QMatrix::identity(n);
  for (std::size_t step = 0; step < n; ++step) {
    QVector v = random_qvector(n, rng);
    v *= 1.0 / v.norm();
    // U <- U (I - 2 v v^*)
    for (std::size_t r = 0; r < n; ++r) {
      Quaternion s;
      for (std::size_t k = 0; k < n; ++k) s += U(r, k) * v[k];
      for (std::size_t c = 0; c < n; ++c) U(r, c) -= s * conj(v[c]) * 2.0;
    }
  }
  for (std::size_t c = 0; c < n; ++c) {
    const Quaternion d = random_unit_quaternion(rng);
    for (std::size_t r = 0; r < n; ++r) U(r, c) = U(r, c) * d;
  }
  return U;
}

}  // namespace qcd
