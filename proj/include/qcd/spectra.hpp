#pragma once

#include <qcd/banded.hpp>
#include <qcd/detail/dense.hpp>
#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace qcd {

inline constexpr double default_membership_tol = 1e-8;

// T^2 - 2 Re(s) T + |s|^2 I
inline QMatrix pencil(const QMatrix& T, const Quaternion& s) {
  if (!T.square()) throw error(errc::dimension_mismatch, "pencil needs a square operator");
  QMatrix P = T * T - T * (2.0 * s.re());
  const double n2 = s.norm_sq();
  for (std::size_t i = 0; i < T.rows(); ++i) P(i, i) += n2;
  return P;
}

struct PencilResult {
  Quaternion s;
  double sigma_min = 0;      // smallest singular value of the (square) complexified pencil
  double sigma_max = 0;
  std::size_t kernel_dim_H = 0;
  std::vector<QVector> kernel_basis;
  std::size_t complex_kernel_dim = 0;
  double surjectivity = 0;   // smallest singular value off the kernel
  std::string diagnostic;    // non-empty on odd complex kernel count and similar

  bool member() const { return kernel_dim_H >= 1; }
};

namespace detail {

// Quaternionic orthonormal basis of the right H-span of complex-rep columns.
inline std::vector<QVector> quaternionic_basis(const CMat& K, std::size_t want) {
  std::vector<QVector> basis;
  for (Eigen::Index c = 0; c < K.cols() && basis.size() < want; ++c) {
    QVector r = from_complex_vector(K.col(c));
    const double n0 = r.norm();
    if (n0 == 0) continue;
    for (int pass = 0; pass < 2; ++pass)
      for (const auto& e : basis) r -= e * inner(r, e);
    const double nr = r.norm();
    if (nr > 1e-6 * n0) basis.push_back(r * (1.0 / nr));
  }
  return basis;
}

inline void set_kernel_dims(PencilResult& res, std::size_t complex_dim) {
  res.complex_kernel_dim = complex_dim;
  res.kernel_dim_H = complex_dim / 2;
  if (complex_dim % 2)
    res.diagnostic = "odd complex kernel dimension " + std::to_string(complex_dim) +
                     "; threshold sits inside a singular-value cluster";
}

}  // namespace detail

// Kernel of the square complexified pencil; s is a member when sigma_min < tol * sigma_max.
inline PencilResult s_point_membership(const QMatrix& T, const Quaternion& s,
                                       double tol = default_membership_tol) {
  PencilResult res;
  res.s = s;
  const CMat P = to_complex(pencil(T, s));
  const detail::Svd sv = detail::svd(P);
  res.sigma_min = sv.sigma_min();
  res.sigma_max = sv.sigma_max();
  // Cut relative to the pencil's natural scale so a near-zero pencil is not read as full rank.
  const double scale = std::max(sv.sigma_max(), std::pow(to_complex(T).norm() + s.abs(), 2));
  Eigen::Index r = 0;
  while (r < sv.S.size() && sv.S(r) > tol * scale) ++r;
  detail::set_kernel_dims(res, static_cast<std::size_t>(P.cols() - r));
  res.surjectivity = r > 0 ? sv.S(r - 1) : 0.0;
  res.kernel_basis = detail::quaternionic_basis(sv.V.rightCols(P.cols() - r), res.kernel_dim_H);
  return res;
}

struct SectionOptions {
  double tol = default_membership_tol;
  double decay_threshold = 0.5;  // max tail/total energy fraction accepted as l^2-decaying
};

// Membership for a rule-defined operator at truncation N. The pencil rows 0..N-1 are taken
// exactly against M = N + 2*ub columns; the null space of that section is filtered to the
// directions whose energy sits in the leading half of the coordinates (decaying modes).
inline PencilResult s_point_membership(const BandedOperator& T, const Quaternion& s, std::size_t N,
                                       SectionOptions opt = {}) {
  const std::size_t ub = T.upper_bandwidth();
  const std::size_t M = N + 2 * ub;
  PencilResult res;
  res.s = s;
  const QMatrix PM = pencil(truncate(T, M), s);

  {
    const detail::RVec sq = detail::singular_values(to_complex(PM.block(0, 0, N, N)));
    res.sigma_min = sq(sq.size() - 1);
    res.sigma_max = sq(0);
  }

  // Rank from the singular values; null space as the complement of the row space, taken from
  // a pivoted QR of R^* (much cheaper than a full SVD with V at this size).
  const CMat R = to_complex(PM.block(0, 0, N, M));
  const detail::RVec sR = detail::singular_values(R);
  Eigen::Index r = 0;
  while (r < sR.size() && sR(r) > opt.tol * sR(0) && sR(r) > 0) ++r;
  res.surjectivity = r > 0 ? sR(r - 1) : 0.0;
  const Eigen::ColPivHouseholderQR<CMat> qr(R.adjoint());
  const CMat Q = qr.householderQ();
  const CMat K = Q.rightCols(R.cols() - r);

  // Tail mask over both complex halves.
  const auto m = static_cast<Eigen::Index>(M);
  const Eigen::Index half = m / 2;
  CMat tail = CMat::Zero(K.cols(), K.cols());
  if (K.cols() > 0) {
    CMat Kt(2 * (m - half), K.cols());
    Kt.topRows(m - half) = K.block(half, 0, m - half, K.cols());
    Kt.bottomRows(m - half) = K.block(m + half, 0, m - half, K.cols());
    tail = Kt.adjoint() * Kt;
  }
  Eigen::SelfAdjointEigenSolver<CMat> es(tail);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index t = 0; t < K.cols(); ++t)
    if (es.eigenvalues()(t) < opt.decay_threshold) keep.push_back(t);
  CMat D(K.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t t = 0; t < keep.size(); ++t) D.col(t) = K * es.eigenvectors().col(keep[t]);
  detail::set_kernel_dims(res, keep.size());
  res.kernel_basis = detail::quaternionic_basis(D, res.kernel_dim_H);
  return res;
}

// ---- right eigenvalues -----------------------------------------------------------

struct EigenClasses {
  std::vector<Quaternion> classes;   // Re + i|Im|, with multiplicity, sorted
  std::vector<cplx> unpaired;        // eigenvalues of A_C left without a conjugate partner
};

inline EigenClasses right_eigen_classes(const QMatrix& A, double pair_tol = 1e-8) {
  if (!A.square()) throw error(errc::dimension_mismatch, "right_eigen_classes needs a square matrix");
  EigenClasses out;
  if (A.rows() == 0) return out;
  Eigen::ComplexEigenSolver<CMat> es(to_complex(A), false);
  std::vector<cplx> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.begin(), ev.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  std::vector<bool> used(ev.size(), false);
  for (std::size_t i = 0; i < ev.size(); ++i) {
    if (used[i]) continue;
    const cplx target = std::conj(ev[i]);
    std::size_t best = ev.size();
    double bd = 0;
    for (std::size_t j = 0; j < ev.size(); ++j) {
      if (j == i || used[j]) continue;
      const double d = std::abs(ev[j] - target);
      if (best == ev.size() || d < bd) {
        best = j;
        bd = d;
      }
    }
    if (best != ev.size() && bd <= pair_tol * std::max(1.0, std::abs(ev[i]))) {
      used[i] = used[best] = true;
      const double re = 0.5 * (ev[i].real() + ev[best].real());
      const double im = 0.5 * (std::abs(ev[i].imag()) + std::abs(ev[best].imag()));
      out.classes.emplace_back(re, im, 0, 0);
    }
  }
  for (std::size_t i = 0; i < ev.size(); ++i)
    if (!used[i]) out.unpaired.push_back(ev[i]);
  std::sort(out.classes.begin(), out.classes.end(), [](const Quaternion& a, const Quaternion& b) {
    if (a.a0 != b.a0) return a.a0 < b.a0;
    return a.a1 < b.a1;
  });
  return out;
}

// Complex basis of ker(T - I w) as quaternionic vectors. Computed at reduce(w) through
// (T_C - w I) x_C = 0, then transported by x -> x q with conj(q) reduce(w) q = w.
inline std::vector<QVector> right_eigenspace(const QMatrix& T, const Quaternion& w,
                                             double tol = default_membership_tol) {
  if (!T.square()) throw error(errc::dimension_mismatch, "right_eigenspace needs a square matrix");
  const Quaternion wr = reduce(w);
  CMat M = to_complex(T);
  M.diagonal().array() -= cplx(wr.a0, wr.a1);
  const detail::Svd sv = detail::svd(M);
  const Eigen::Index r = sv.sigma_max() == 0 ? 0 : sv.rank(tol);
  const CMat K = sv.V.rightCols(M.cols() - r);
  const Quaternion q = symmetry_witness(wr, w, 1e-9 * std::max(1.0, w.abs()));
  std::vector<QVector> out;
  for (Eigen::Index c = 0; c < K.cols(); ++c) out.push_back(from_complex_vector(K.col(c)) * q);
  return out;
}

struct RadiusEstimate {
  double estimate = 0;
  std::vector<double> sequence;  // ||T_N^m||^{1/m}, m = 1..m_max
};

inline RadiusEstimate s_radius_estimate(const BandedOperator& T, std::size_t N, std::size_t m_max) {
  if (m_max < 1) throw error(errc::invalid_argument, "m_max must be >= 1");
  const CMat A = to_complex(truncate(T, N));
  CMat P = CMat::Identity(A.rows(), A.cols());
  RadiusEstimate out;
  for (std::size_t m = 1; m <= m_max; ++m) {
    P = P * A;
    const double nrm = detail::spectral_norm(P);
    out.sequence.push_back(nrm == 0 ? 0.0 : std::pow(nrm, 1.0 / double(m)));
  }
  out.estimate = out.sequence.back();
  return out;
}

}  // namespace qcd
