#pragma once

#include <qcd/detail/dense.hpp>
#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/spectra.hpp>

#include <Eigen/Eigenvalues>

#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace qcd {

struct JetFrame {
  Quaternion base;
  std::size_t order = 0;
  std::vector<std::vector<QVector>> jets;  // jets[i][k] = gamma_i^{(k)}(base)

  std::size_t rank() const { return jets.size(); }
  std::size_t dim() const { return jets.empty() ? 0 : jets.front().front().size(); }
  const QVector& jet(std::size_t i, std::size_t k) const { return jets.at(i).at(k); }
};

struct FrameOptions {
  double cutoff = 1e-10;   // sigma < cutoff * sigma_max counts as zero
  double gray_zone = 1e-7; // retained sigma below this ratio makes the rank ambiguous
  double radius = 0.25;    // intended radius for the truncation guard
  double guard = 0.5;      // ||gamma^(K)|| r^K / K! must stay below guard * ||gamma|| (K >= 1)
};

inline double factorial(std::size_t k) {
  double f = 1;
  for (std::size_t t = 2; t <= k; ++t) f *= double(t);
  return f;
}

namespace detail {

inline void require_reduced(const Quaternion& w0) {
  if (!w0.is_complex() || !(w0.a1 > 0))
    throw error(errc::invalid_argument, "base point must be reduced and non-real (a + b i, b > 0)");
}

// Taylor coefficients c_k = X^k x of the pinv frame of (A - p I), one column block per kernel vector.
struct ComplexJets {
  std::vector<CMat> coeffs;  // coeffs[k] has one column per section
};

inline ComplexJets complex_jets(const CMat& A, cplx p, std::size_t K, const FrameOptions& opt) {
  CMat M = A;
  M.diagonal().array() -= p;
  const Svd sv = svd(M);
  const Eigen::Index r = sv.sigma_max() == 0 ? 0 : sv.rank(opt.cutoff);
  const Eigen::Index d = M.cols() - r;
  if (d == 0) throw error(errc::empty_kernel, "T - I w0 has trivial kernel at this truncation");
  if (r > 0 && sv.S(r - 1) < opt.gray_zone * sv.sigma_max())
    throw error(errc::ill_conditioned, "numerical rank of T_C - w0 I is ambiguous");
  ComplexJets out;
  CMat x = sv.V.rightCols(d);
  fix_column_phases(x);
  out.coeffs.push_back(x);
  for (std::size_t k = 1; k <= K; ++k) {
    CMat next(x.rows(), d);
    for (Eigen::Index c = 0; c < d; ++c) next.col(c) = sv.pinv_apply(out.coeffs.back().col(c), opt.cutoff);
    out.coeffs.push_back(next);
  }
  const double rK = std::pow(opt.radius, double(K));
  for (Eigen::Index c = 0; K > 0 && c < d; ++c)
    if (out.coeffs.back().col(c).norm() * rK > opt.guard * out.coeffs.front().col(c).norm())
      throw error(errc::ill_conditioned, "jet series does not settle within the intended radius");
  return out;
}

}  // namespace detail

// Jets gamma_i^{(k)} = k! (X^k x_i)_H with X the minimum-norm right inverse of T_C - w0 I.
inline JetFrame frame_from_right_inverse(const QMatrix& T, const Quaternion& w0, std::size_t K,
                                         FrameOptions opt = {}) {
  if (!T.square()) throw error(errc::dimension_mismatch, "frame needs a square operator");
  detail::require_reduced(w0);
  const detail::ComplexJets cj = detail::complex_jets(to_complex(T), w0.z1(), K, opt);
  JetFrame F;
  F.base = w0;
  F.order = K;
  const Eigen::Index n = cj.coeffs.front().cols();
  F.jets.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (std::size_t k = 0; k <= K; ++k)
      F.jets[i].push_back(from_complex_vector(cj.coeffs[k].col(i)) * factorial(k));
  return F;
}

// Push every jet through U.
inline JetFrame transport(const QMatrix& U, const JetFrame& F) {
  JetFrame G = F;
  for (auto& sec : G.jets)
    for (auto& v : sec) v = U * v;
  return G;
}

// Mix sections: gamma'_j = sum_a gamma_a C(a, j) for complex C.
inline JetFrame mix_sections(const JetFrame& F, const CMat& C) {
  JetFrame G = F;
  const std::size_t n = F.rank();
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t k = 0; k <= F.order; ++k) {
      QVector s(F.dim());
      for (std::size_t a = 0; a < n; ++a) s += F.jets[a][k] * Quaternion(C(a, j));
      G.jets[j][k] = s;
    }
  return G;
}

// gamma -> gamma f for a complex polynomial f(w) = sum p_l (w - w0)^l (Leibniz rule on jets).
inline JetFrame apply_gauge(const JetFrame& F, const std::vector<cplx>& poly) {
  JetFrame G = F;
  for (std::size_t i = 0; i < F.rank(); ++i)
    for (std::size_t m = 0; m <= F.order; ++m) {
      QVector s(F.dim());
      double binom = 1;  // C(m, l)
      for (std::size_t l = 0; l <= m; ++l) {
        if (l > 0) binom = binom * double(m - l + 1) / double(l);
        const cplx fl = l < poly.size() ? poly[l] * factorial(l) : cplx(0);
        if (fl != cplx(0)) s += F.jets[i][m - l] * Quaternion(fl * binom);
      }
      G.jets[i][m] = s;
    }
  return G;
}

// ---- Gram data ----------------------------------------------------------------------

struct GramData {
  std::size_t order = 0, rank = 0;
  std::vector<Quaternion> g;

  GramData() = default;
  GramData(std::size_t K, std::size_t n) : order(K), rank(n), g((K + 1) * (K + 1) * n * n) {}

  Quaternion& at(std::size_t m, std::size_t k, std::size_t i, std::size_t j) {
    return g[((m * (order + 1) + k) * rank + i) * rank + j];
  }
  const Quaternion& at(std::size_t m, std::size_t k, std::size_t i, std::size_t j) const {
    return g[((m * (order + 1) + k) * rank + i) * rank + j];
  }
  double block_max(std::size_t m, std::size_t k) const {
    double b = 0;
    for (std::size_t i = 0; i < rank; ++i)
      for (std::size_t j = 0; j < rank; ++j) b = std::max(b, at(m, k, i, j).abs());
    return b;
  }
};

// G[m][k][i][j] = <gamma_i^{(m)}, gamma_j^{(k)}>
inline GramData gram(const JetFrame& F) {
  GramData G(F.order, F.rank());
  for (std::size_t m = 0; m <= F.order; ++m)
    for (std::size_t k = 0; k <= F.order; ++k)
      for (std::size_t i = 0; i < F.rank(); ++i)
        for (std::size_t j = 0; j < F.rank(); ++j) G.at(m, k, i, j) = inner(F.jets[i][m], F.jets[j][k]);
  return G;
}

// ---- derivative identities ----------------------------------------------------------

struct DerivativeReport {
  std::vector<double> tangent;  // T g^(k) - g^(k) w0 - k g^(k-1), relative
  std::vector<double> pencil;   // P g^(k) - k(k-1) g^(k-2) - k g^(k-1)(w0 - conj w0), relative
  std::vector<double> power;    // P^k g^(k) - k! g (w0 - conj w0)^k, relative, k <= 3
  double max() const {
    double m = 0;
    for (double v : tangent) m = std::max(m, v);
    for (double v : pencil) m = std::max(m, v);
    for (double v : power) m = std::max(m, v);
    return m;
  }
};

inline DerivativeReport derivative_identity_check(const QMatrix& T, const JetFrame& F) {
  DerivativeReport rep;
  const Quaternion w = F.base, d = F.base - conj(F.base);
  const QMatrix P = pencil(T, w);
  rep.tangent.assign(F.order + 1, 0.0);
  rep.pencil.assign(F.order + 1, 0.0);
  rep.power.assign(std::min<std::size_t>(F.order, 3) + 1, 0.0);
  for (const auto& g : F.jets) {
    for (std::size_t k = 0; k <= F.order; ++k) {
      QVector r1 = T * g[k] - g[k] * w;
      QVector r2 = P * g[k];
      double s1 = g[k].norm() * (1 + w.abs()), s2 = g[k].norm();
      if (k >= 1) {
        r1 -= g[k - 1] * double(k);
        r2 -= g[k - 1] * d * double(k);
        s1 += k * g[k - 1].norm();
        s2 += k * g[k - 1].norm() * d.abs();
      }
      if (k >= 2) {
        r2 -= g[k - 2] * double(k * (k - 1));
        s2 += double(k * (k - 1)) * g[k - 2].norm();
      }
      rep.tangent[k] = std::max(rep.tangent[k], r1.norm() / std::max(1.0, s1));
      rep.pencil[k] = std::max(rep.pencil[k], r2.norm() / std::max(1.0, s2));
    }
    for (std::size_t k = 0; k < rep.power.size(); ++k) {
      QVector v = g[k];
      for (std::size_t t = 0; t < k; ++t) v = P * v;
      Quaternion dk(1);
      for (std::size_t t = 0; t < k; ++t) dk = dk * d;
      const QVector want = g[0] * dk * factorial(k);
      rep.power[k] = std::max(rep.power[k], (v - want).norm() / std::max(1.0, want.norm()));
    }
  }
  return rep;
}

struct JetBasisReport {
  bool ok = false;
  std::size_t h_rank = 0, expected = 0;
  double max_residual = 0;  // ||P^k g|| / (||P||^k ||g||)
  explicit operator bool() const { return ok; }
};

inline JetBasisReport jet_basis_check(const QMatrix& T, const JetFrame& F, std::size_t k,
                                      double tol = 1e-8) {
  if (k > F.order + 1) throw error(errc::invalid_argument, "k exceeds frame order + 1");
  JetBasisReport rep;
  rep.expected = F.rank() * k;
  const QMatrix P = pencil(T, F.base);
  const double pn = detail::spectral_norm(to_complex(P));
  std::vector<QVector> vs;
  for (const auto& g : F.jets)
    for (std::size_t m = 0; m < k; ++m) {
      vs.push_back(g[m]);
      QVector v = g[m];
      for (std::size_t t = 0; t < k; ++t) v = P * v;
      const double scale = std::pow(std::max(pn, 1e-300), double(k)) * g[m].norm();
      rep.max_residual = std::max(rep.max_residual, v.norm() / std::max(scale, 1e-300));
    }
  rep.h_rank = h_rank(vs);
  rep.ok = rep.h_rank == rep.expected && rep.max_residual <= tol;
  return rep;
}

// Right coefficients q_m with target = sum_m basis[m] q_m (least squares in the complex rep).
inline std::vector<Quaternion> right_coefficients(const std::vector<QVector>& basis, const QVector& target) {
  const CMat B = complex_span_columns(basis);
  const CVec c = B.completeOrthogonalDecomposition().solve(to_complex(target));
  const auto k = static_cast<Eigen::Index>(basis.size());
  std::vector<Quaternion> q;
  for (Eigen::Index m = 0; m < k; ++m) q.push_back(Quaternion::merge(c(m), c(k + m)));
  return q;
}

// Matrix of the pencil on span{gamma^(0..K)} (rank 1): P g^(k) = sum_m g^(m) B(m, k).
inline QMatrix pencil_matrix_on_jets(const QMatrix& T, const JetFrame& F) {
  if (F.rank() != 1) throw error(errc::rank_mismatch, "pencil matrix on jets needs a rank-1 frame");
  const QMatrix P = pencil(T, F.base);
  QMatrix B(F.order + 1, F.order + 1);
  for (std::size_t k = 0; k <= F.order; ++k) {
    const auto q = right_coefficients(F.jets[0], P * F.jets[0][k]);
    for (std::size_t m = 0; m <= F.order; ++m) B(m, k) = q[m];
  }
  return B;
}

// ---- rigidity ---------------------------------------------------------------------------

struct GramComparison {
  bool condition3 = false;   // blocks (m, 0), m <= K
  bool all_blocks = false;   // every (m, k)
  double dev_condition3 = 0; // worst deviation / allowance, (m, 0) blocks
  double dev_all = 0;        // worst deviation / allowance, all blocks
  std::size_t worst_m = 0, worst_k = 0;
};

// Entrywise deviation against tol * max(1, block max-norm), per (m, k) block.
inline GramComparison compare_gram(const GramData& a, const GramData& b, double tol = 1e-8) {
  if (a.order != b.order || a.rank != b.rank)
    throw error(errc::rank_mismatch, "Gram tables differ in order or rank");
  GramComparison c;
  for (std::size_t m = 0; m <= a.order; ++m)
    for (std::size_t k = 0; k <= a.order; ++k) {
      const double allow = tol * std::max({1.0, a.block_max(m, k), b.block_max(m, k)});
      double dev = 0;
      for (std::size_t i = 0; i < a.rank; ++i)
        for (std::size_t j = 0; j < a.rank; ++j)
          dev = std::max(dev, (a.at(m, k, i, j) - b.at(m, k, i, j)).abs());
      const double ratio = dev / allow;
      if (k == 0) c.dev_condition3 = std::max(c.dev_condition3, ratio);
      if (ratio > c.dev_all) {
        c.dev_all = ratio;
        c.worst_m = m;
        c.worst_k = k;
      }
    }
  c.condition3 = c.dev_condition3 <= 1.0;
  c.all_blocks = c.dev_all <= 1.0;
  return c;
}

struct RigidityResult {
  bool congruent = false;
  GramComparison gram;
  std::optional<QMatrix> U;     // isometry on the jet span, zero on its complement
  double reconstruction = 0;    // ||U A - B|| / ||B|| over the scaled jets
  double structure_deviation = 0;
};

namespace detail {

// Complex-rep columns of all jets with j partners, each jet scaled by 1/scale[i][k]
// (unit norm when scale is empty).
inline CMat jet_columns(const JetFrame& F, const std::vector<std::vector<double>>& scale = {}) {
  std::vector<QVector> vs;
  for (std::size_t i = 0; i < F.rank(); ++i)
    for (std::size_t k = 0; k <= F.order; ++k) {
      const double s = scale.empty() ? F.jets[i][k].norm() : scale[i][k];
      vs.push_back(F.jets[i][k] * (s > 0 ? 1.0 / s : 0.0));
    }
  return complex_span_columns(vs);
}

inline std::vector<std::vector<double>> jet_norms(const JetFrame& F) {
  std::vector<std::vector<double>> out(F.rank());
  for (std::size_t i = 0; i < F.rank(); ++i)
    for (const auto& v : F.jets[i]) out[i].push_back(v.norm());
  return out;
}

// Orthonormal basis (complex rep) of the jet span.
inline CMat jet_span_basis(const JetFrame& F, double rel_tol = 1e-8) {
  const CMat A = jet_columns(F);
  const Svd sv = svd(A, false);
  return sv.U.leftCols(sv.rank(rel_tol));
}

}  // namespace detail

inline RigidityResult rigidity_check(const JetFrame& F, const JetFrame& G, double tol = 1e-8) {
  if (F.rank() != G.rank() || F.order != G.order || F.dim() != G.dim())
    throw error(errc::rank_mismatch, "frames differ in rank, order or dimension");
  if (dist_inf(F.base, G.base) > 1e-12) throw error(errc::rank_mismatch, "frames have different base points");
  RigidityResult res;
  res.gram = compare_gram(gram(F), gram(G), tol);
  res.congruent = res.gram.condition3 && res.gram.all_blocks;
  if (!res.congruent) return res;
  // Same scaling on both sides; directions below the cutoff are left out of W.
  const auto sc = detail::jet_norms(F);
  const CMat A = detail::jet_columns(F, sc), B = detail::jet_columns(G, sc);
  const CMat W = B * detail::svd(A, false).pinv(1e-8);
  res.reconstruction = (W * A - B).norm() / std::max(B.norm(), 1e-300);
  // Rounding in B is amplified by the smallest kept singular value of A.
  res.U = nearest_quaternionic(W, &res.structure_deviation);
  if (res.structure_deviation > 1e-5 * std::max(1.0, W.cwiseAbs().maxCoeff()))
    throw error(errc::ill_conditioned, "jet span too ill-conditioned to rebuild the isometry");
  return res;
}

// ---- gauge alignment and operator equivalence -------------------------------------------

// Unitary C (n x n complex) with M1_mk C = C M2_mk for every Gram block, M_mk = Gamma^(k)* Gamma^(m)
// (Taylor scaled). Real-linear null space of the intertwining equations, a generic element of it,
// then its polar factor. Empty when no intertwiner exists.
inline std::optional<CMat> align_gauge(const GramData& a, const GramData& b, double tol = 1e-8) {
  if (a.order != b.order || a.rank != b.rank) return std::nullopt;
  const auto n = static_cast<Eigen::Index>(a.rank);
  const std::size_t K = a.order;
  auto block_c = [&](const GramData& g, std::size_t m, std::size_t k) {
    QMatrix M(a.rank, a.rank);
    const double s = 1.0 / (factorial(m) * factorial(k));
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) M(j, i) = g.at(m, k, i, j) * s;
    return to_complex(M);
  };
  std::vector<std::pair<CMat, CMat>> blocks;
  for (std::size_t m = 0; m <= K; ++m)
    for (std::size_t k = 0; k <= K; ++k) blocks.emplace_back(block_c(a, m, k), block_c(b, m, k));

  const Eigen::Index unknowns = 2 * n * n;
  const Eigen::Index per_block = 2 * (2 * n) * (2 * n);
  Eigen::MatrixXd L(per_block * static_cast<Eigen::Index>(blocks.size()), unknowns);
  auto diag_rep = [&](const CMat& C) {
    CMat D = CMat::Zero(2 * n, 2 * n);
    D.topLeftCorner(n, n) = C;
    D.bottomRightCorner(n, n) = C.conjugate();
    return D;
  };
  for (Eigen::Index u = 0; u < unknowns; ++u) {
    CMat E = CMat::Zero(n, n);
    E(u / 2 / n, (u / 2) % n) = (u % 2) ? cplx(0, 1) : cplx(1, 0);
    const CMat D = diag_rep(E);
    Eigen::Index row = 0;
    for (const auto& [m1, m2] : blocks) {
      const CMat R = m1 * D - D * m2;
      for (Eigen::Index t = 0; t < R.size(); ++t) {
        L(row++, u) = R(t).real();
        L(row++, u) = R(t).imag();
      }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> sv(L, Eigen::ComputeFullV);
  const auto& S = sv.singularValues();
  // Measured against the data scale, not L's own: L vanishes when every C is an intertwiner.
  double scale = 1;
  for (const auto& [m1, m2] : blocks) scale = std::max({scale, m1.cwiseAbs().maxCoeff(), m2.cwiseAbs().maxCoeff()});
  std::vector<Eigen::Index> null;
  for (Eigen::Index t = 0; t < unknowns; ++t)
    if (t >= S.size() || S(t) <= tol * scale) null.push_back(t);
  if (null.empty()) return std::nullopt;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::normal_distribution<double> g;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(unknowns);
  for (Eigen::Index t : null) x += g(rng) * sv.matrixV().col(t);
  CMat C(n, n);
  for (Eigen::Index u = 0; u < unknowns; u += 2) C(u / 2 / n, (u / 2) % n) = cplx(x(u), x(u + 1));
  Eigen::JacobiSVD<CMat> cs(C);
  if (cs.singularValues()(n - 1) <= 1e-8 * cs.singularValues()(0)) return std::nullopt;
  return detail::polar_unitary(C);
}

struct EquivalenceResult {
  bool equivalent = false;
  std::string reason;
  std::optional<QMatrix> U;
  double intertwining = 0;  // ||(U T1 - T2 U) E|| / max(1, ||T1||) on the jet span E
  RigidityResult rigidity;
};

// ||(U T1 - T2 U) E|| relative to max(1, ||T1||), E an orthonormal basis of the jet span of F.
inline double intertwining_residual(const QMatrix& U, const QMatrix& T1, const QMatrix& T2,
                                    const JetFrame& F) {
  // Measured on the unit-normalized jets; an orthonormal span basis would weight the
  // near-dependent directions U is not resolved on.
  const CMat E = detail::jet_columns(F);
  const CMat Uc = to_complex(U), A = to_complex(T1), B = to_complex(T2);
  const CMat R = (Uc * A - B * Uc) * E;
  return detail::spectral_norm(R) / (std::max(1.0, detail::spectral_norm(A)) * detail::spectral_norm(E));
}

inline EquivalenceResult operator_equivalence(const QMatrix& T1, const QMatrix& T2, const Quaternion& w0,
                                              std::size_t K, double tol = 1e-8, FrameOptions opt = {}) {
  EquivalenceResult res;
  const JetFrame F1 = frame_from_right_inverse(T1, w0, K, opt);
  const JetFrame F2 = frame_from_right_inverse(T2, w0, K, opt);
  if (F1.rank() != F2.rank()) {
    res.reason = "kernel ranks differ at w0";
    return res;
  }
  const GramData g1 = gram(F1), g2 = gram(F2);
  const auto C = align_gauge(g1, g2, tol);
  if (!C) {
    res.reason = "no unitary gauge matches the Gram data";
    res.rigidity.gram = compare_gram(g1, g2, tol);
    return res;
  }
  const JetFrame F2a = mix_sections(F2, C->adjoint());
  res.rigidity = rigidity_check(F1, F2a, tol);
  if (!res.rigidity.congruent) {
    res.reason = "Gram data differ after gauge alignment";
    return res;
  }
  res.U = res.rigidity.U;
  res.intertwining = intertwining_residual(*res.U, T1, T2, F1);
  res.equivalent = res.intertwining < tol;
  if (!res.equivalent) res.reason = "isometry fails to intertwine on the jet span";
  return res;
}

}  // namespace qcd
