#pragma once

// The twelve acceptance criteria as library calls. Each returns a verdict plus a one-line
// detail; wall times are reported through the progress callback only.

#include <qcd/banded.hpp>
#include <qcd/bundles.hpp>
#include <qcd/canonical.hpp>
#include <qcd/fixtures.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/shifts.hpp>
#include <qcd/spectra.hpp>
#include <qcd/verify/oracles.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

namespace qcd::verify {

struct SuiteConfig {
  std::uint64_t seed = 20240611;
  double time_budget = 60.0;  // seconds, whole suite
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0;  // not part of any serialized verdict
};

struct SuiteResult {
  std::vector<CriterionResult> criteria;
  double seconds = 0;
  bool passed() const {
    for (const auto& c : criteria)
      if (!c.passed) return false;
    return !criteria.empty();
  }
};

using Progress = std::function<void(const CriterionResult&)>;

namespace detail {

inline std::string fmt(const char* f, double a) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}
inline std::string fmt(const char* f, double a, double b) {
  char buf[128];
  std::snprintf(buf, sizeof buf, f, a, b);
  return buf;
}

inline std::uint64_t mix(std::uint64_t seed, std::uint64_t salt) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

// 1. (AB)_C = A_C B_C and exact round trip, 1000 pairs of 8 x 8.
inline CriterionResult criterion_homomorphism(const SuiteConfig& cfg) {
  CriterionResult r{1, "representation homomorphism"};
  std::mt19937_64 rng(detail::mix(cfg.seed, 1));
  double worst = 0;
  bool exact = true;
  for (int t = 0; t < 1000; ++t) {
    const QMatrix A = random_qmatrix(8, 8, rng), B = random_qmatrix(8, 8, rng);
    const CMat lhs = to_complex(oracle::matmul(A, B));
    const CMat rhs = to_complex(A) * to_complex(B);
    worst = std::max(worst, oracle::max_abs(lhs - rhs));
    const QMatrix back = from_complex(to_complex(A));
    for (std::size_t i = 0; i < 8 && exact; ++i)
      for (std::size_t j = 0; j < 8; ++j)
        if (!(back(i, j) == A(i, j))) exact = false;
  }
  r.passed = worst < 1e-12 && exact;
  r.detail = detail::fmt("max |(AB)_C - A_C B_C| = %.3g", worst) + (exact ? ", round trip exact" : ", round trip inexact");
  return r;
}

// 2. pencil(T, s) x = (T - I s)((T - I conj s) x), N = 16.
inline CriterionResult criterion_factorization(const SuiteConfig& cfg) {
  CriterionResult r{2, "pencil factorization"};
  std::mt19937_64 rng(detail::mix(cfg.seed, 2));
  double worst = 0;
  for (int t = 0; t < 1000; ++t) {
    const QMatrix T = random_qmatrix(16, 16, rng, 0.25);
    const Quaternion s = random_quaternion(rng);
    const QVector x = random_qvector(16, rng);
    const QVector lhs = pencil(T, s) * x;
    const QVector rhs = oracle::shifted_apply(T, s, oracle::shifted_apply(T, conj(s), x));
    worst = std::max(worst, (lhs - rhs).norm() / x.norm());
  }
  r.passed = worst < 1e-12;
  r.detail = detail::fmt("max residual / |x| = %.3g", worst);
  return r;
}

// 3. Kernel dimensions of the two-region shift over N = 32, 64, 128.
inline CriterionResult criterion_tci(const SuiteConfig&) {
  CriterionResult r{3, "two-region shift kernel dimensions"};
  const BandedOperator T = tci_operator();
  const auto Ns = doubling_truncations(32);
  const ProbeReport p1 = bn_probe(T, fixtures::tci_omega1_samples(), Ns);
  const ProbeReport p2 = bn_probe(T, fixtures::tci_omega2_samples(), Ns);
  r.passed = p1.n == std::size_t(1) && p2.n == std::size_t(2);
  auto show = [](const ProbeReport& p) { return p.n ? std::to_string(*p.n) : std::string("unstable"); };
  r.detail = "n = " + show(p1) + " on region 1, n = " + show(p2) + " on region 2";
  return r;
}

// 4. Closed-form shift eigenvectors against the row recurrence, N = 64.
inline CriterionResult criterion_busev(const SuiteConfig& cfg) {
  CriterionResult r{4, "closed-form shift eigenvectors"};
  std::mt19937_64 rng(detail::mix(cfg.seed, 4));
  const WeightRule rules[2] = {WeightRule::ratio(), WeightRule::listed({2.0, 1.5, 3.0, 2.5})};
  const std::size_t N = 64;
  double worst = 0, geo = 0;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 100; ++t) {
    const WeightRule& w = rules[t % 2];
    const double radius = rsp(w, 10000).estimate;
    Quaternion s;
    do {
      const Quaternion dir = random_unit_quaternion(rng);
      s = dir * (0.8 * radius * u(rng));
    } while (s.abs_im() < 1e-3);
    const Quaternion x1 = random_quaternion(rng), x2 = random_quaternion(rng);
    const QVector a = s_eigvec_closed_form(w, s, x1, x2, N);
    const QVector b = oracle::shift_kernel_recurrence(w, s, x1, x2, N);
    worst = std::max(worst, (a - b).norm() / std::max(1.0, b.norm()));
    const Quaternion q = random_quaternion(rng);
    const QVector g = s_eigvec_closed_form(w, s, q, q * s / w(1).a0, N);
    const QVector h = oracle::geometric_eigvec(w, s, q, N);
    geo = std::max(geo, (g - h).norm() / h.norm());
  }
  r.passed = worst < 1e-10 && geo < 1e-13;
  r.detail = detail::fmt("closed form vs recurrence %.3g, geometric seed %.3g", worst, geo);
  return r;
}

// 5. rsp on constant and telescoping weights.
inline CriterionResult criterion_rsp(const SuiteConfig&) {
  CriterionResult r{5, "rsp estimator"};
  const double one = rsp(WeightRule::constant(1.0), 10000).estimate;
  const double ratio = rsp(WeightRule::ratio(), 10000).estimate;
  const double two = rsp(WeightRule::constant(2.0), 10000).estimate;
  r.passed = std::abs(one - 1) <= 1e-12 && std::abs(ratio - 1) < 1e-2 && two == 2.0;
  r.detail = "const 1 -> " + format_real(one) + ", ratio -> " + format_real(ratio) + ", const 2 -> " + format_real(two);
  return r;
}

// 6. Derivative identities on the worked pair at w0 = i, N = 64, k <= 8.
inline CriterionResult criterion_derivatives(const SuiteConfig&) {
  CriterionResult r{6, "jet derivative identities"};
  double worst = 0;
  for (const BandedOperator& op : {cndu_T(), cndu_T_tilde()}) {
    const QMatrix T = truncate(op, 64);
    const DerivativeReport rep = derivative_identity_check(T, frame_from_right_inverse(T, Quaternion::unit_i(), 8));
    worst = std::max(worst, rep.max());
  }
  r.passed = worst < 1e-9;
  r.detail = detail::fmt("max relative residual %.3g", worst);
  return r;
}

// Fixtures with a known frame; used by criteria 7 and 10.
struct FrameFixture {
  BandedOperator op;
  Quaternion w0;
};

inline std::vector<FrameFixture> rigidity_fixtures() {
  return {{cndu_T(), Quaternion::unit_i()},
          {cndu_T_tilde(), Quaternion::unit_i()},
          {tci_operator(), Quaternion(0, 0.7, 0, 0)},
          {weighted_shift(WeightRule::constant(2.0)), Quaternion(0, 0.6, 0, 0)}};
}

// 7. Rigidity round trip with 20 random unitaries, N = 32, K = 6.
inline CriterionResult criterion_rigidity(const SuiteConfig& cfg) {
  CriterionResult r{7, "rigidity round trip"};
  const auto fx = rigidity_fixtures();
  double worst = 0;
  bool all = true, flipped = true;
  for (int t = 0; t < 20; ++t) {
    const FrameFixture& f = fx[t % fx.size()];
    const QMatrix T = truncate(f.op, 32);
    const QMatrix U0 = householder_random_unitary(32, detail::mix(cfg.seed, 700 + t));
    const JetFrame F = frame_from_right_inverse(T, f.w0, 6);
    const JetFrame TF = transport(U0, F);
    const RigidityResult rc = rigidity_check(F, TF);
    all = all && rc.congruent && rc.U;
    if (rc.U) {
      const CMat A = qcd::detail::jet_columns(F);
      const double e = (to_complex(*rc.U - U0) * A).norm() / A.norm();
      worst = std::max(worst, e);
    }
    GramData g = gram(TF);
    g.at(1, 0, 0, 0) += Quaternion(1e-4);
    g.at(0, 1, 0, 0) = conj(g.at(1, 0, 0, 0));
    const GramComparison c = compare_gram(gram(F), g);
    flipped = flipped && !(c.condition3 && c.all_blocks);
  }
  r.passed = all && worst < 1e-8 && flipped;
  r.detail = detail::fmt("max |(U - U0) jets| = %.3g", worst) + (all ? "" : ", a pair was not congruent") +
             (flipped ? ", 1e-4 Gram perturbation rejected" : ", perturbation not detected");
  return r;
}

// 8. Canonical entries of the worked pair and both negative verdicts.
inline CriterionResult criterion_cndu_canonical(const SuiteConfig&) {
  CriterionResult r{8, "worked pair canonical entries"};
  const Quaternion i = Quaternion::unit_i(), j = Quaternion::unit_j();
  const QMatrix T = truncate(cndu_T(), 64), Tt = truncate(cndu_T_tilde(), 64);
  const CanonicalRep N1 = canonical_matrix(T, i, 8), N2 = canonical_matrix(Tt, i, 8);
  const double e1 = dist_inf(N1.N(0, 1), Quaternion(1) + 2.0 * (j * i));
  const double e2 = dist_inf(N2.N(0, 1), Quaternion(std::sqrt(0.5)));
  const bool ad = ad_theta_equivalent(N1, N2).equivalent;
  const bool oe = operator_equivalence(T, Tt, i, 8).equivalent;
  r.passed = e1 < 1e-10 && e2 < 1e-10 && !ad && !oe;
  r.detail = detail::fmt("entry errors %.3g, %.3g", e1, e2) + "; ad_theta " + (ad ? "true" : "false") +
             ", operator equivalence " + (oe ? "true" : "false");
  return r;
}

// 9. Equal curvature on the disc grid from closed-form norms.
inline CriterionResult criterion_cndu_curvature(const SuiteConfig&) {
  CriterionResult r{9, "worked pair curvature"};
  const Section s1 = fixtures::cndu_section_T(64), s2 = fixtures::cndu_section_T_tilde(64);
  double diff = 0, gap = 0;
  const auto grid = fixtures::cndu_grid();
  for (cplx w : grid) {
    const CurvatureSample a = curvature(s1, w), b = curvature(s2, w);
    diff = std::max(diff, std::abs(a.K - b.K));
    gap = std::max({gap, a.gap, b.gap});
  }
  r.passed = diff < 1e-8 && gap < 1e-6;
  r.detail = detail::fmt("max |K_T - K_T~| = %.3g", diff) + detail::fmt(", max estimator gap %.3g", gap) +
             ", " + std::to_string(grid.size()) + " points";
  return r;
}

// 10. Complex-rep and quaternionic equivalence agree on 10 fixtures and on the worked pair.
inline CriterionResult criterion_complex_rep(const SuiteConfig& cfg) {
  CriterionResult r{10, "complex representation equivalence"};
  const std::vector<FrameFixture> fx = {{cndu_T(), Quaternion::unit_i()},
                                        {cndu_T_tilde(), Quaternion::unit_i()},
                                        {tci_operator(), Quaternion(0, 0.7, 0, 0)}};
  bool agree = true;
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const FrameFixture& f = fx[t % fx.size()];
    const QMatrix T = truncate(f.op, 32);
    const QMatrix U0 = householder_random_unitary(32, detail::mix(cfg.seed, 1000 + t));
    const QMatrix T2 = U0 * T * U0.adjoint();
    const EquivalenceResult q = operator_equivalence(T, T2, f.w0, 6);
    const ComplexEquivalenceResult c = complex_rep_equivalence(T, T2, f.w0, 6);
    agree = agree && q.equivalent && c.equivalent;
    worst = std::max({worst, c.w_residual, c.u_residual});
    if (q.U) worst = std::max(worst, complex_rep_forward_residual(*q.U, T, T2, frame_from_right_inverse(T, f.w0, 6)));
  }
  const QMatrix A = truncate(cndu_T(), 32), B = truncate(cndu_T_tilde(), 32);
  const bool q_pair = operator_equivalence(A, B, Quaternion::unit_i(), 6).equivalent;
  const bool c_pair = complex_rep_equivalence(A, B, Quaternion::unit_i(), 6).equivalent;
  r.passed = agree && worst < 1e-8 && !q_pair && !c_pair;
  r.detail = std::string("fixtures ") + (agree ? "agree" : "disagree") + detail::fmt(", max residual %.3g", worst) +
             "; worked pair " + (q_pair || c_pair ? "reported equivalent" : "false on both routes");
  return r;
}

// 11. e^{-i theta} (z1 + j z2) e^{i theta} = z1 + j z2 e^{2 i theta}.
inline CriterionResult criterion_ad_theta(const SuiteConfig& cfg) {
  CriterionResult r{11, "ad_theta scalar identity"};
  std::mt19937_64 rng(detail::mix(cfg.seed, 11));
  std::vector<Quaternion> qs;
  for (int t = 0; t < 1000; ++t) qs.push_back(random_quaternion(rng));
  const double pi = std::acos(-1.0);
  double worst = 0;
  for (int k = 0; k < 360; ++k) {
    const double th = k * pi / 180;
    for (const auto& q : qs) {
      worst = std::max(worst, dist_inf(oracle::ad_theta_lhs(q, th), oracle::ad_theta_rhs(q, th)));
      worst = std::max(worst, dist_inf(exp_i(-th) * q * exp_i(th), oracle::ad_theta_rhs(q, th)));
    }
  }
  r.passed = worst < 1e-13;
  r.detail = detail::fmt("max error %.3g over 360 angles x 1000 quaternions", worst);
  return r;
}

struct CriterionSpec {
  int id;
  double time_limit;  // seconds, 0 = none
  std::function<CriterionResult(const SuiteConfig&)> run;
};

inline std::vector<CriterionSpec> criteria() {
  return {{1, 5.0, criterion_homomorphism},  {2, 0, criterion_factorization},
          {3, 10.0, criterion_tci},          {4, 0, criterion_busev},
          {5, 0, criterion_rsp},             {6, 0, criterion_derivatives},
          {7, 0, criterion_rigidity},        {8, 0, criterion_cndu_canonical},
          {9, 20.0, criterion_cndu_curvature}, {10, 0, criterion_complex_rep},
          {11, 0, criterion_ad_theta}};
}

// Runs 1..11, then 12 (all passed within the time budget).
inline SuiteResult run_suite(const SuiteConfig& cfg = {}, const Progress& progress = {}) {
  using clock = std::chrono::steady_clock;
  SuiteResult out;
  const auto t0 = clock::now();
  for (const auto& c : criteria()) {
    const auto ts = clock::now();
    CriterionResult res;
    try {
      res = c.run(cfg);
    } catch (const std::exception& e) {
      res.id = c.id;
      res.name = "criterion " + std::to_string(c.id);
      res.passed = false;
      res.detail = std::string("threw ") + e.what();
    }
    res.seconds = std::chrono::duration<double>(clock::now() - ts).count();
    if (c.time_limit > 0 && res.seconds >= c.time_limit) {
      res.passed = false;
      res.detail += detail::fmt("; over the %.0f s limit", c.time_limit);
    }
    if (progress) progress(res);
    out.criteria.push_back(std::move(res));
  }
  out.seconds = std::chrono::duration<double>(clock::now() - t0).count();
  CriterionResult last{12, "full suite"};
  bool prior = true;
  for (const auto& c : out.criteria) prior = prior && c.passed;
  last.passed = prior && out.seconds < cfg.time_budget;
  last.seconds = out.seconds;
  last.detail = std::string(prior ? "criteria 1-11 passed" : "some criteria failed") +
                (out.seconds < cfg.time_budget ? ", within the time budget" : ", over the time budget");
  if (progress) progress(last);
  out.criteria.push_back(std::move(last));
  return out;
}

}  // namespace qcd::verify
