#pragma once

#include <qcd/bundles.hpp>
#include <qcd/detail/dense.hpp>
#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>

#include <cmath>
#include <functional>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

namespace qcd {

struct CanonicalRep {
  Quaternion base;
  std::size_t size = 0;   // K + 1
  QMatrix N;              // upper triangular, diagonal base
  double diag_residual = 0;   // max |<T e_j, e_j> - w0| before normalization
  double lower_residual = 0;  // max |<T e_j, e_i>|, i > j
};

inline CanonicalRep canonical_matrix_from_frame(const QMatrix& T, const JetFrame& F, double tol = 1e-8) {
  if (F.rank() != 1) throw error(errc::rank_mismatch, "canonical matrix needs a rank-1 frame");
  const std::vector<QVector> e = gram_schmidt_q(F.jets[0]);
  const std::size_t n = e.size();
  CanonicalRep rep;
  rep.base = F.base;
  rep.size = n;
  rep.N = QMatrix(n, n);
  std::vector<QVector> Te;
  for (const auto& ej : e) Te.push_back(T * ej);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion v = inner(Te[j], e[i]);
      if (i < j) rep.N(i, j) = v;
      else if (i == j) rep.diag_residual = std::max(rep.diag_residual, (v - F.base).abs());
      else rep.lower_residual = std::max(rep.lower_residual, v.abs());
    }
  for (std::size_t j = 0; j < n; ++j) rep.N(j, j) = F.base;
  if (rep.diag_residual > tol * std::max(1.0, F.base.abs()))
    throw error(errc::ill_conditioned, "canonical diagonal deviates from w0");
  return rep;
}

inline CanonicalRep canonical_matrix(const QMatrix& T, const Quaternion& w0, std::size_t K,
                                     FrameOptions opt = {}) {
  return canonical_matrix_from_frame(T, frame_from_right_inverse(T, w0, K, opt));
}

struct AdThetaResult {
  bool equivalent = false;
  std::optional<double> theta;  // representative in [0, pi); theta + pi works equally
  std::string reason;
};

// N2 = e^{-i theta} N1 e^{i theta} entrywise: equal C-parts, equal j-part moduli, one common
// ratio z2'/z2 = e^{2 i theta}.
inline AdThetaResult ad_theta_equivalent(const CanonicalRep& N1, const CanonicalRep& N2, double tol = 1e-8) {
  if (N1.size != N2.size || N1.N.rows() != N2.N.rows() || N1.N.cols() != N2.N.cols())
    throw error(errc::size_mismatch, "canonical matrices differ in size");
  if (dist_inf(N1.base, N2.base) > tol) throw error(errc::size_mismatch, "canonical matrices differ in base point");
  AdThetaResult res;
  const std::size_t n = N1.N.rows();
  cplx vote(0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion a = N1.N(i, j), b = N2.N(i, j);
      const double allow = tol * std::max({1.0, a.abs(), b.abs()});
      if (std::abs(a.z1() - b.z1()) > allow) {
        res.reason = "C-parts differ at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return res;
      }
      if (std::abs(std::abs(a.z2()) - std::abs(b.z2())) > allow) {
        res.reason = "j-part moduli differ at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return res;
      }
      if (std::abs(a.z2()) > tol) vote += b.z2() * std::conj(a.z2());
    }
  cplx e2(1, 0);
  if (std::abs(vote) > 0) e2 = vote / std::abs(vote);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const Quaternion a = N1.N(i, j), b = N2.N(i, j);
      if (std::abs(a.z2()) <= tol) continue;
      if (std::abs(b.z2() - a.z2() * e2) > tol * std::max(1.0, std::abs(a.z2()))) {
        res.reason = "j-part phases disagree at (" + std::to_string(i) + "," + std::to_string(j) + ")";
        return res;
      }
    }
  double theta = 0.5 * std::arg(e2);
  if (theta < 0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta -= std::numbers::pi;
  res.equivalent = true;
  res.theta = theta;
  return res;
}

// e^{-i theta} N e^{i theta}, entrywise.
inline CanonicalRep conjugate_by_phase(CanonicalRep rep, double theta) {
  const Quaternion l = exp_i(-theta), r = exp_i(theta);
  for (std::size_t i = 0; i < rep.N.rows(); ++i)
    for (std::size_t j = 0; j < rep.N.cols(); ++j) rep.N(i, j) = l * rep.N(i, j) * r;
  return rep;
}

// ---- curvature -----------------------------------------------------------------------------

struct Section {
  std::function<QVector(cplx)> value;
  std::function<QVector(cplx)> derivative;
  std::function<double(cplx)> norm_sq;  // optional closed form of ||gamma(w)||^2
};

struct CurvatureSample {
  cplx w;
  double K = 0;            // estimator A (Richardson-extrapolated finite differences)
  double K_formula = 0;    // estimator B
  double gap = 0;          // |A - B|
  double richardson = 0;   // |A(h) - A(h/2)|
};

namespace detail {

inline double section_norm_sq(const Section& s, cplx w) {
  return s.norm_sq ? s.norm_sq(w) : s.value(w).norm_sq();
}

inline double fd_curvature(const Section& s, cplx w, double h) {
  auto f = [&](cplx z) {
    const double n = section_norm_sq(s, z);
    if (!(n > 1e-280)) throw error(errc::vanishing_section, "section vanishes near w");
    return std::log(n);
  };
  const cplx dx(h, 0), dy(0, h);
  const double lap = (f(w + dx) + f(w - dx) + f(w + dy) + f(w - dy) - 4 * f(w)) / (h * h);
  return -0.25 * lap;
}

}  // namespace detail

// (|<g', g>_C|^2 - ||g'||^2 ||g||^2) / ||g||^4
inline double curvature_formula(const QVector& g, const QVector& dg) {
  const double n = g.norm_sq();
  if (!(n > 1e-280)) throw error(errc::vanishing_section, "section vanishes at w");
  const double c = std::norm(inner(dg, g).z1());
  return (c - dg.norm_sq() * n) / (n * n);
}

// Same expression with the full quaternionic inner product; not the curvature in general.
inline double quaternionic_formula(const QVector& g, const QVector& dg) {
  const double n = g.norm_sq();
  if (!(n > 1e-280)) throw error(errc::vanishing_section, "section vanishes at w");
  return (inner(dg, g).norm_sq() - dg.norm_sq() * n) / (n * n);
}

inline CurvatureSample curvature(const Section& s, cplx w, double h = 1e-3) {
  CurvatureSample out;
  out.w = w;
  const double a1 = detail::fd_curvature(s, w, h);
  const double a2 = detail::fd_curvature(s, w, h / 2);
  out.K = (4 * a2 - a1) / 3;
  out.richardson = std::abs(a1 - a2);
  out.K_formula = curvature_formula(s.value(w), s.derivative(w));
  out.gap = std::abs(out.K - out.K_formula);
  return out;
}

// Taylor polynomial of section i of a frame.
inline Section section_from_frame(const JetFrame& F, std::size_t i = 0) {
  Section s;
  const cplx w0 = F.base.z1();
  s.value = [F, i, w0](cplx w) {
    QVector v(F.dim());
    cplx p(1);
    for (std::size_t k = 0; k <= F.order; ++k) {
      v += F.jets[i][k] * Quaternion(p / factorial(k));
      p *= (w - w0);
    }
    return v;
  };
  s.derivative = [F, i, w0](cplx w) {
    QVector v(F.dim());
    cplx p(1);
    for (std::size_t k = 1; k <= F.order; ++k) {
      v += F.jets[i][k] * Quaternion(p / factorial(k - 1));
      p *= (w - w0);
    }
    return v;
  };
  return s;
}

// gamma -> gamma f for holomorphic complex f with derivative df.
inline Section gauge_section(Section s, std::function<cplx(cplx)> f, std::function<cplx(cplx)> df) {
  Section g;
  g.value = [s, f](cplx w) { return s.value(w) * Quaternion(f(w)); };
  g.derivative = [s, f, df](cplx w) {
    return s.derivative(w) * Quaternion(f(w)) + s.value(w) * Quaternion(df(w));
  };
  if (s.norm_sq) g.norm_sq = [s, f](cplx w) { return s.norm_sq(w) * std::norm(f(w)); };
  return g;
}

// ---- complex-representation equivalence --------------------------------------------------

struct ComplexEquivalenceResult {
  bool equivalent = false;
  std::string reason;
  std::optional<CMat> W;          // complex intertwiner on the jet span (both frames)
  std::optional<QMatrix> U;       // quaternionic map with U_C = V on the jet span
  double theta0 = 0;              // f = e^{i theta0}
  double w_residual = 0;          // ||(W T1_C - T2_C W) E||, relative
  double u_residual = 0;          // ||(U T1 - T2 U) E||, relative
  double gram_deviation = 0;      // worst deviation / allowance
};

namespace detail {

inline CMat stack_coeffs(const ComplexJets& cj) {
  CMat A(cj.coeffs.front().rows(), static_cast<Eigen::Index>(cj.coeffs.size()));
  for (std::size_t k = 0; k < cj.coeffs.size(); ++k) A.col(static_cast<Eigen::Index>(k)) = cj.coeffs[k].col(0);
  return A;
}

inline double span_residual(const CMat& W, const CMat& A1, const CMat& A2, const CMat& E) {
  return spectral_norm((W * A1 - A2 * W) * E) / std::max(1.0, spectral_norm(A1));
}

}  // namespace detail

// Decides unitary equivalence of T1_C and T2_C from the normalized complex frames at w0 and
// conj(w0); when equivalent, splits the intertwiner's phase and returns the quaternionic U.
inline ComplexEquivalenceResult complex_rep_equivalence(const QMatrix& T1, const QMatrix& T2,
                                                        const Quaternion& w0, std::size_t K,
                                                        double tol = 1e-8, FrameOptions opt = {}) {
  detail::require_reduced(w0);
  ComplexEquivalenceResult res;
  const CMat A1 = to_complex(T1), A2 = to_complex(T2);
  const cplx p = w0.z1();
  const auto u1 = detail::complex_jets(A1, p, K, opt), l1 = detail::complex_jets(A1, std::conj(p), K, opt);
  const auto u2 = detail::complex_jets(A2, p, K, opt), l2 = detail::complex_jets(A2, std::conj(p), K, opt);
  if (u1.coeffs.front().cols() != 1 || u2.coeffs.front().cols() != 1 || l1.coeffs.front().cols() != 1 ||
      l2.coeffs.front().cols() != 1)
    throw error(errc::rank_mismatch, "complex-rep equivalence needs rank-1 frames");
  const CMat a1 = detail::stack_coeffs(u1), b1 = detail::stack_coeffs(l1);
  const CMat a2 = detail::stack_coeffs(u2), b2 = detail::stack_coeffs(l2);

  const CMat Guu1 = a1.adjoint() * a1, Guu2 = a2.adjoint() * a2;
  const CMat Gll1 = b1.adjoint() * b1, Gll2 = b2.adjoint() * b2;
  const CMat Gul1 = b1.adjoint() * a1, Gul2 = b2.adjoint() * a2;
  auto dev = [&](const CMat& x, const CMat& y) {
    return (x - y).cwiseAbs().maxCoeff() / (tol * std::max({1.0, x.cwiseAbs().maxCoeff(), y.cwiseAbs().maxCoeff()}));
  };
  // Gul2 = rho * Gul1 with |rho| = 1
  const cplx num = (Gul2.array() * Gul1.conjugate().array()).sum();
  const double den = Gul1.cwiseAbs2().sum();
  cplx rho(1);
  if (den > tol * tol && std::abs(num) > 0) rho = num / std::abs(num);
  res.gram_deviation = std::max({dev(Guu1, Guu2), dev(Gll1, Gll2), dev(Gul1 * rho, Gul2)});
  if (res.gram_deviation > 1.0) {
    res.reason = "normalized complex frames have different Gram data";
    return res;
  }

  CMat B1(a1.rows(), a1.cols() + b1.cols()), B2(a2.rows(), a2.cols() + b2.cols());
  B1 << a1, b1;
  B2 << a2, b2 * rho;
  const detail::Svd s1 = detail::svd(B1, false);
  const CMat W = B2 * s1.pinv(1e-10);
  const CMat E = s1.U.leftCols(s1.rank(1e-10));
  res.W = W;
  res.w_residual = detail::span_residual(W, A1, A2, E);

  // conj(f) from W (a j)_C = ((W a) j)_C conj(f)
  const CVec x = W * j_partner(a1.col(0));
  const CVec y = j_partner(CMat(W * a1.col(0)));
  const cplx fbar = y.dot(x) / y.squaredNorm();
  if (std::abs(std::abs(fbar) - 1.0) > 1e-6)
    throw error(errc::no_intertwiner, "phase factor is not unimodular");
  const cplx f = std::conj(fbar);
  if ((W * j_partner(a1) - j_partner(CMat(W * a1)) * fbar).norm() > 1e-6 * std::max(1.0, a1.norm()))
    throw error(errc::no_intertwiner, "phase factor is not constant along the jets");
  res.theta0 = std::arg(f);

  const CMat Y = W * a1 * std::exp(cplx(0, -res.theta0 / 2));
  CMat src(a1.rows(), 2 * a1.cols()), dst(a1.rows(), 2 * a1.cols());
  src << a1, j_partner(a1);
  dst << Y, j_partner(Y);
  const detail::Svd s2 = detail::svd(src, false);
  const CMat V = dst * s2.pinv(1e-10);
  res.U = from_complex(V, 1e-8);
  const CMat Uc = to_complex(*res.U);
  const CMat Es = s2.U.leftCols(s2.rank(1e-10));
  res.u_residual = detail::span_residual(Uc, A1, A2, Es);
  res.equivalent = res.w_residual < tol && res.u_residual < tol;
  if (!res.equivalent) res.reason = "intertwiner residual above tolerance";
  return res;
}

// Forward direction: W = U_C from a quaternionic equivalence, residual on the jet span of F.
inline double complex_rep_forward_residual(const QMatrix& U, const QMatrix& T1, const QMatrix& T2,
                                           const JetFrame& F) {
  return intertwining_residual(U, T1, T2, F);
}

}  // namespace qcd
