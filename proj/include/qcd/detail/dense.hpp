#pragma once

// Dense complex kernels (SVD, null spaces, pseudo-inverse) on top of Eigen.

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <vector>

namespace qcd::detail {

using cplx = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

struct Svd {
  CMat U;  // rows x rows
  RVec S;  // min(rows, cols), descending
  CMat V;  // cols x cols
  Eigen::Index rows = 0, cols = 0;

  double sigma_max() const { return S.size() ? S(0) : 0.0; }
  double sigma_min() const { return S.size() ? S(S.size() - 1) : 0.0; }

  // Singular values >= rel_tol * sigma_max.
  Eigen::Index rank(double rel_tol) const {
    const double cut = rel_tol * sigma_max();
    Eigen::Index r = 0;
    while (r < S.size() && S(r) > cut && S(r) > 0) ++r;
    return r;
  }

  // Orthonormal basis of the numerical null space (including the cols - rows excess).
  CMat null_space(double rel_tol) const {
    const Eigen::Index r = rank(rel_tol);
    return V.rightCols(cols - r);
  }

  // Minimum-norm solution x = V S^+ U^* b with cutoff.
  CVec pinv_apply(const CVec& b, double rel_tol) const {
    const Eigen::Index r = rank(rel_tol);
    CVec c = U.leftCols(r).adjoint() * b;
    for (Eigen::Index t = 0; t < r; ++t) c(t) /= S(t);
    return V.leftCols(r) * c;
  }

  CMat pinv(double rel_tol) const {
    const Eigen::Index r = rank(rel_tol);
    CMat Vs = V.leftCols(r);
    for (Eigen::Index t = 0; t < r; ++t) Vs.col(t) /= S(t);
    return Vs * U.leftCols(r).adjoint();
  }
};

inline Svd svd(const CMat& M, bool full = true) {
  Svd out;
  out.rows = M.rows();
  out.cols = M.cols();
  if (M.size() == 0) {
    out.U = CMat::Identity(M.rows(), M.rows());
    out.V = CMat::Identity(M.cols(), M.cols());
    out.S = RVec(0);
    return out;
  }
  const unsigned opts = full ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                             : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (std::max(M.rows(), M.cols()) <= 24) {
    Eigen::JacobiSVD<CMat> s(M, opts);
    out.U = s.matrixU();
    out.V = s.matrixV();
    out.S = s.singularValues();
  } else {
    Eigen::BDCSVD<CMat> s(M, opts);
    out.U = s.matrixU();
    out.V = s.matrixV();
    out.S = s.singularValues();
  }
  return out;
}

inline RVec singular_values(const CMat& M) {
  if (M.size() == 0) return RVec(0);
  Eigen::BDCSVD<CMat> s(M);
  return s.singularValues();
}

inline double spectral_norm(const CMat& M) {
  const RVec s = singular_values(M);
  return s.size() ? s(0) : 0.0;
}

// Rotate each column so its largest-modulus coordinate (lowest index on ties) is real positive.
inline void fix_column_phases(CMat& M) {
  for (Eigen::Index c = 0; c < M.cols(); ++c) {
    Eigen::Index best = 0;
    double bm = -1;
    for (Eigen::Index r = 0; r < M.rows(); ++r) {
      const double a = std::abs(M(r, c));
      if (a > bm * (1 + 1e-9)) {
        bm = a;
        best = r;
      }
    }
    if (bm > 0) M.col(c) *= std::conj(M(best, c)) / bm;
  }
}

// Unitary polar factor of a square matrix.
inline CMat polar_unitary(const CMat& A) {
  Eigen::JacobiSVD<CMat> s(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return s.matrixU() * s.matrixV().adjoint();
}

}  // namespace qcd::detail
