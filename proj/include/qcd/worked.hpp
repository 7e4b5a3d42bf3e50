#pragma once

// Reports for the two worked operators: the two-region shift and the curvature-twin pair.

#include <qcd/banded.hpp>
#include <qcd/bundles.hpp>
#include <qcd/canonical.hpp>
#include <qcd/fixtures.hpp>
#include <qcd/shifts.hpp>

#include <optional>
#include <vector>

namespace qcd::worked {

struct TciReport {
  std::size_t N = 0;
  std::vector<std::size_t> truncations;
  std::vector<Quaternion> grid1, grid2;
  ProbeReport region1, region2;

  bool reproduces() const { return region1.n == std::size_t(1) && region2.n == std::size_t(2); }
};

inline TciReport tci_example(std::size_t N, SectionOptions opt = {}) {
  TciReport rep;
  rep.N = N;
  rep.truncations = doubling_truncations(N);
  const BandedOperator T = tci_operator();
  rep.grid1 = fixtures::tci_grid(1);
  rep.grid2 = fixtures::tci_grid(2);
  rep.region1 = bn_probe(T, rep.grid1, rep.truncations, opt);
  rep.region2 = bn_probe(T, rep.grid2, rep.truncations, opt);
  return rep;
}

struct CurvaturePair {
  CurvatureSample a, b;
};

struct CurvatureComparison {
  std::vector<CurvaturePair> samples;
  double max_diff = 0;  // max |K_a - K_b|
  double max_gap = 0;   // max estimator gap over both
  bool same = false;
  bool estimators_agree = false;
};

inline CurvatureComparison compare_curvature(const Section& a, const Section& b, const std::vector<cplx>& grid,
                                             double tol = 1e-8, double gap_tol = 1e-6, double h = 1e-3) {
  CurvatureComparison c;
  for (cplx w : grid) {
    CurvaturePair p{curvature(a, w, h), curvature(b, w, h)};
    c.max_diff = std::max(c.max_diff, std::abs(p.a.K - p.b.K));
    c.max_gap = std::max({c.max_gap, p.a.gap, p.b.gap});
    c.samples.push_back(p);
  }
  c.same = !grid.empty() && c.max_diff < tol;
  c.estimators_agree = c.max_gap < gap_tol;
  return c;
}

// Quaternionic-formula values at one grid point, against the true curvature.
struct FormulaGap {
  cplx w;
  double curvature = 0, quaternionic = 0;
};

inline std::optional<FormulaGap> quaternionic_formula_differs(const Section& s, const std::vector<cplx>& grid,
                                                             double margin = 1e-6) {
  for (cplx w : grid) {
    const QVector g = s.value(w), dg = s.derivative(w);
    const double k = curvature_formula(g, dg), q = quaternionic_formula(g, dg);
    if (std::abs(k - q) > margin) return FormulaGap{w, k, q};
  }
  return std::nullopt;
}

struct CnduReport {
  std::size_t N = 0, K = 0;
  CurvatureComparison curvature;
  CanonicalRep canonical_T, canonical_T_tilde;
  AdThetaResult ad_theta;
  EquivalenceResult quaternionic;
  ComplexEquivalenceResult complex_rep;

  bool same_curvature() const { return curvature.same; }
  // Decided by the canonical matrices; the two jet routes are reported alongside.
  bool unitarily_equivalent() const { return ad_theta.equivalent; }
  bool routes_agree() const {
    return ad_theta.equivalent == quaternionic.equivalent && ad_theta.equivalent == complex_rep.equivalent;
  }
};

inline CnduReport cndu_example(std::size_t N, std::size_t K, double tol = 1e-8) {
  CnduReport rep;
  rep.N = N;
  rep.K = K;
  const Quaternion i = Quaternion::unit_i();
  rep.curvature = compare_curvature(fixtures::cndu_section_T(N), fixtures::cndu_section_T_tilde(N),
                                    fixtures::cndu_grid(), tol);
  const QMatrix T = truncate(cndu_T(), N), Tt = truncate(cndu_T_tilde(), N);
  rep.canonical_T = canonical_matrix(T, i, K);
  rep.canonical_T_tilde = canonical_matrix(Tt, i, K);
  rep.ad_theta = ad_theta_equivalent(rep.canonical_T, rep.canonical_T_tilde, tol);
  rep.quaternionic = operator_equivalence(T, Tt, i, K, tol);
  rep.complex_rep = complex_rep_equivalence(T, Tt, i, K, tol);
  return rep;
}

}  // namespace qcd::worked
