#include "support.hpp"

#include <qcd/verify/oracles.hpp>

#include <numbers>

namespace qcd {
namespace {

using test::kSeed;
using test::QNear;

const Quaternion I = Quaternion::unit_i(), J = Quaternion::unit_j();

// ---- truncation ---------------------------------------------------------------------

TEST(Truncate, UnweightedShift) {
  const QMatrix want{{0, 1}, {0, 0}};
  EXPECT_EQ(truncate(backward_shift(), 2), want);
}

TEST(Truncate, WorkedOperatorT) {
  const QMatrix want{{I, Quaternion(1) + 2.0 * (J * I), Quaternion(1) + J},
                     {0, I, 1},
                     {0, 0, I}};
  EXPECT_EQ(truncate(cndu_T(), 3), want);
}

TEST(Truncate, WorkedOperatorTTilde) {
  const QMatrix want{{I, Quaternion(0.5) - 0.5 * J, 1},
                     {0, J * I, Quaternion(1) + J},
                     {0, 0, I}};
  EXPECT_EQ(truncate(cndu_T_tilde(), 3), want);
}

TEST(Truncate, LeadingCornerIsExact) {
  const BandedOperator T = weighted_shift(WeightRule::ratio());
  const QMatrix A = truncate(T, 40), B = truncate(T, 17);
  EXPECT_EQ(A.block(0, 0, 17, 17), B);
  for (std::size_t n = 1; n < 17; ++n) EXPECT_EQ(B(n - 1, n), Quaternion(double(n + 1) / double(n)));
}

TEST(Truncate, PatchTooLarge) {
  try {
    truncate(cndu_T(), 2);
    FAIL() << "expected PatchTooLarge";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::patch_too_large);
  }
}

// ---- pencil and membership ------------------------------------------------------------

TEST(Pencil, ZeroOperator) {
  const Quaternion s(0.3, 0.4, -1, 2);
  const QMatrix P = pencil(QMatrix(4, 4), s);
  EXPECT_LT(test::max_dist(P, QMatrix::identity(4) * s.norm_sq()), 1e-15);
}

TEST(Pencil, Factorization) {
  std::mt19937_64 rng(kSeed + 40);
  for (int t = 0; t < 50; ++t) {
    const QMatrix T = random_qmatrix(6, 6, rng);
    const Quaternion s = random_quaternion(rng);
    const QVector x = random_qvector(6, rng);
    const QVector want = oracle::shifted_apply(T, s, oracle::shifted_apply(T, conj(s), x));
    EXPECT_LT(test::max_dist(pencil(T, s) * x, want), 1e-12 * std::max(1.0, want.norm()));
  }
}

TEST(Pencil, DependsOnlyOnSymmetryClass) {
  std::mt19937_64 rng(kSeed + 41);
  for (int t = 0; t < 50; ++t) {
    const QMatrix T = random_qmatrix(5, 5, rng);
    const Quaternion s = random_quaternion(rng), w = random_unit_quaternion(rng);
    const Quaternion s2 = conj(w) * s * w;
    EXPECT_LT(test::max_dist(pencil(T, s), pencil(T, s2)), 1e-13 * std::max(1.0, s.norm_sq()));
    EXPECT_EQ(s_point_membership(T, s).kernel_dim_H, s_point_membership(T, s2).kernel_dim_H);
  }
  // Bitwise when the representatives share Re and |.|^2 exactly.
  const QMatrix T = random_qmatrix(4, 4, rng);
  EXPECT_EQ(pencil(T, Quaternion(0.5, 0, 2, 0)), pencil(T, Quaternion(0.5, 2, 0, 0)));
}

TEST(Membership, DiagonalI) {
  const QMatrix T = QMatrix::diagonal({I, Quaternion(2), Quaternion(0, 0, 0, 3)});
  const PencilResult r = s_point_membership(T, I);
  EXPECT_TRUE(r.member());
  EXPECT_GE(r.kernel_dim_H, 1u);
  EXPECT_FALSE(s_point_membership(T, Quaternion(0, 2, 0, 0)).member());
  EXPECT_TRUE(s_point_membership(T, Quaternion(0, 0, 3, 0)).member());
}

TEST(Membership, KernelBasisIsOrthonormalAndAnnihilated) {
  std::mt19937_64 rng(kSeed + 42);
  const QMatrix U = householder_random_unitary(6, kSeed);
  const QMatrix D = QMatrix::diagonal({I, I * 2.0, J, Quaternion(1), Quaternion(0.5, 0, 0, 1), Quaternion(3)});
  const QMatrix T = U * D * U.adjoint();
  const PencilResult r = s_point_membership(T, I);
  ASSERT_EQ(r.kernel_dim_H, 2u);  // i and j are in the same class
  const QMatrix P = pencil(T, I);
  for (std::size_t a = 0; a < r.kernel_basis.size(); ++a) {
    for (std::size_t b = 0; b < r.kernel_basis.size(); ++b)
      EXPECT_TRUE(QNear(inner(r.kernel_basis[a], r.kernel_basis[b]), Quaternion(a == b ? 1.0 : 0.0), 1e-10));
    EXPECT_LT((P * r.kernel_basis[a]).norm(), 1e-10);
    // right linearity of the kernel
    const Quaternion q = random_quaternion(rng);
    EXPECT_LT((P * (r.kernel_basis[a] * q)).norm(), 1e-10 * std::max(1.0, q.abs()));
  }
}

TEST(Membership, TwoRegionShiftSampleInRegionOne) {
  const PencilResult r = s_point_membership(tci_operator(), Quaternion(0, 0.9, 0, 0), 64);
  EXPECT_EQ(r.kernel_dim_H, 1u);
  EXPECT_TRUE(r.diagnostic.empty());
}

TEST(Membership, TwoRegionShiftSampleInRegionTwo) {
  const PencilResult r = s_point_membership(tci_operator(), Quaternion(0, 0.4, 0, 0), 64);
  EXPECT_EQ(r.kernel_dim_H, 2u);
  EXPECT_TRUE(r.diagnostic.empty());
}

TEST(Membership, SymmetricRepresentativeOnBandedOperator) {
  const Quaternion s(0.1, 0.3, 0, 0);
  const Quaternion w = (Quaternion(1) + J + Quaternion(0, 0, 0, 1)) / std::sqrt(3.0);
  EXPECT_EQ(s_point_membership(tci_operator(), conj(w) * s * w, 32).kernel_dim_H, 2u);
}

// ---- right eigenvalues --------------------------------------------------------------------

TEST(RightEigenClasses, ScalarJ) {
  const EigenClasses c = right_eigen_classes(QMatrix{{J}});
  ASSERT_EQ(c.classes.size(), 1u);
  EXPECT_TRUE(QNear(c.classes[0], I, 1e-14));
  EXPECT_TRUE(c.unpaired.empty());
  EXPECT_TRUE(s_point_membership(QMatrix{{J}}, c.classes[0]).member());
}

TEST(RightEigenClasses, Nilpotent) {
  const EigenClasses c = right_eigen_classes(QMatrix{{0, 1}, {0, 0}});
  ASSERT_EQ(c.classes.size(), 2u);
  for (const auto& q : c.classes) EXPECT_TRUE(QNear(q, Quaternion(), 1e-8));
}

TEST(RightEigenClasses, ConjugationInvariant) {
  std::mt19937_64 rng(kSeed + 43);
  for (int t = 0; t < 10; ++t) {
    const QMatrix A = random_qmatrix(6, 6, rng);
    const QMatrix U = householder_random_unitary(6, kSeed + t);
    const EigenClasses a = right_eigen_classes(A), b = right_eigen_classes(U.adjoint() * A * U);
    ASSERT_EQ(a.classes.size(), b.classes.size());
    EXPECT_TRUE(a.unpaired.empty());
    for (const auto& q : a.classes) {
      double best = 1e300;
      for (const auto& p : b.classes) best = std::min(best, dist_inf(p, q));
      EXPECT_LT(best, 1e-8);
    }
  }
}

TEST(RightEigenClasses, SphericalAndRightEigenvaluesAgree) {
  std::mt19937_64 rng(kSeed + 44);
  for (int t = 0; t < 10; ++t) {
    const QMatrix A = random_qmatrix(5, 5, rng);
    const EigenClasses c = right_eigen_classes(A);
    ASSERT_EQ(c.classes.size(), 5u);
    for (const auto& q : c.classes) {
      EXPECT_TRUE(s_point_membership(A, q, 1e-8).member()) << to_string(q);
      // each class has a genuine right eigenvector at a random point of its sphere
      const Quaternion w = random_unit_quaternion(rng);
      const Quaternion s = conj(w) * q * w;
      const auto xs = right_eigenspace(A, s);
      ASSERT_FALSE(xs.empty());
      EXPECT_LT((A * xs[0] - xs[0] * s).norm(), 1e-9 * (1 + A.max_abs()));
    }
    // conversely, a point off every sphere fails the pencil test
    Quaternion far(100, 100, 0, 0);
    EXPECT_FALSE(s_point_membership(A, far).member());
  }
}

TEST(RightEigenvectors, TransportAlongTheSphere) {
  std::mt19937_64 rng(kSeed + 45);
  const QMatrix A = random_qmatrix(5, 5, rng);
  const Quaternion w = right_eigen_classes(A).classes.back();
  const QVector x = right_eigenspace(A, w).front();
  for (int t = 0; t < 20; ++t) {
    const Quaternion q = random_quaternion(rng);
    const QVector y = x * q;
    EXPECT_LT((A * y - y * (inverse(q) * w * q)).norm(), 1e-9 * std::max(1.0, q.abs()));
  }
}

TEST(RightEigenvectors, PencilKernelSplitsIntoEigenvectors) {
  std::mt19937_64 rng(kSeed + 46);
  const QMatrix A = random_qmatrix(6, 6, rng);
  Quaternion w;
  for (const auto& q : right_eigen_classes(A).classes)
    if (q.a1 > 0.1) w = q;
  ASSERT_GT(w.a1, 0.1);
  const PencilResult r = s_point_membership(A, w);
  ASSERT_GE(r.kernel_dim_H, 1u);
  const Quaternion d_inv = inverse(w - conj(w));
  for (const auto& x : r.kernel_basis) {
    const QVector u = A * x - x * conj(w);  // in ker(T - I w)
    const QVector v = A * x - x * w;        // in ker(T - I conj w)
    EXPECT_LT((A * u - u * w).norm(), 1e-9);
    EXPECT_LT((A * v - v * conj(w)).norm(), 1e-9);
    EXPECT_LT(test::max_dist((u - v) * d_inv, x), 1e-9);
    const QVector vj = v * J;  // moved to the w side
    EXPECT_LT((A * vj - vj * w).norm(), 1e-9);
  }
}

// ---- spectral radius ------------------------------------------------------------------------

TEST(SRadius, BackwardShift) {
  const RadiusEstimate r = s_radius_estimate(backward_shift(), 64, 20);
  ASSERT_EQ(r.sequence.size(), 20u);
  for (double v : r.sequence) EXPECT_NEAR(v, 1.0, 1e-12);
  EXPECT_NEAR(r.estimate, 1.0, 1e-12);
}

TEST(SRadius, ZeroOperator) {
  EXPECT_EQ(s_radius_estimate(weighted_shift(WeightRule::constant(0.0)), 8, 4).estimate, 0.0);
}

TEST(SRadius, Diagonal) {
  const Quaternion q(0, 0, std::sqrt(2.0), std::sqrt(2.0));
  BandedOperator T{q, WeightRule::constant(0.0), {}, "diag"};
  EXPECT_NEAR(s_radius_estimate(T, 8, 6).estimate, 2.0, 1e-12);
  EXPECT_THROW(s_radius_estimate(T, 8, 0), error);
}

// ---- positivize ------------------------------------------------------------------------------

TEST(Positivize, PositiveWeightsGiveIdentity) {
  const Positivized p = positivize(WeightRule::ratio(), 12);
  EXPECT_EQ(p.X, QMatrix::identity(12));
}

TEST(Positivize, ConstantI) {
  const std::size_t N = 32;
  const WeightRule w = WeightRule::constant(I);
  const Positivized p = positivize(w, N);
  const Quaternion cyc[4] = {Quaternion(1), -I, Quaternion(-1), I};
  for (std::size_t n = 0; n < N; ++n) EXPECT_TRUE(QNear(p.X(n, n), cyc[n % 4], 1e-15));
  const QMatrix T = truncate(weighted_shift(w), N), Tt = truncate(weighted_shift(p.wabs), N);
  EXPECT_LT(test::max_dist(oracle::matmul(T, p.X), oracle::matmul(p.X, Tt)), 1e-13);
}

TEST(Positivize, RandomUnitModulusWeights) {
  std::mt19937_64 rng(kSeed + 47);
  std::vector<Quaternion> ws;
  for (int n = 0; n < 40; ++n) ws.push_back(random_unit_quaternion(rng));
  const WeightRule w = WeightRule::listed(ws);
  const std::size_t N = 32;
  const Positivized p = positivize(w, N);
  const QMatrix T = truncate(weighted_shift(w), N), Tt = truncate(weighted_shift(p.wabs), N);
  EXPECT_LT(test::max_dist(T * p.X, p.X * Tt), 1e-12);
  EXPECT_LT(test::max_dist(p.X.adjoint() * p.X, QMatrix::identity(N)), 1e-13);
}

TEST(Positivize, ZeroWeight) {
  try {
    positivize(WeightRule::listed({Quaternion(1), Quaternion(0)}), 5);
    FAIL() << "expected ZeroWeight";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::zero_weight);
  }
}

// ---- closed-form eigenvectors ---------------------------------------------------------------

TEST(ClosedForm, GeometricVector) {
  const WeightRule w = WeightRule::listed({2, 1.5, 3, 2.5});
  const Quaternion s(0.2, 0.3, -0.4, 0.1);
  const std::size_t N = 24;
  const QVector x = s_eigvec_closed_form(w, s, 1, s / w(1).a0, N);
  const QVector g = oracle::geometric_eigvec(w, s, 1, N);
  EXPECT_LT(test::max_dist(x, g), 1e-13);
  // a genuine right eigenvector away from the last row
  const QVector r = truncate(weighted_shift(w), N) * x - x * s;
  for (std::size_t n = 0; n + 1 < N; ++n) EXPECT_LT(r[n].abs(), 1e-13);
}

TEST(ClosedForm, ZeroSeeds) {
  const QVector x = s_eigvec_closed_form(WeightRule::constant(1.0), I * 0.5, 0, 0, 10);
  EXPECT_EQ(x, QVector(10));
}

TEST(ClosedForm, MatchesPencilRecurrence) {
  std::mt19937_64 rng(kSeed + 48);
  const std::size_t N = 64;
  for (const WeightRule& w : {WeightRule::ratio(), WeightRule::constant(2.0), WeightRule::listed({2, 1.5, 3, 2.5})}) {
    for (int t = 0; t < 5; ++t) {
      const Quaternion s = random_unit_quaternion(rng) * 0.6;
      const Quaternion x1 = random_quaternion(rng), x2 = random_quaternion(rng);
      const QVector a = s_eigvec_closed_form(w, s, x1, x2, N);
      const QVector b = oracle::shift_kernel_recurrence(w, s, x1, x2, N);
      double scale = 0;
      for (const auto& q : b) scale = std::max(scale, q.abs());
      EXPECT_LT(test::max_dist(a, b), 1e-10 * std::max(1.0, scale)) << w.name;
    }
  }
}

TEST(ClosedForm, RealSRejected) {
  try {
    s_eigvec_closed_form(WeightRule::constant(1.0), Quaternion(0.5), 1, 1, 8);
    FAIL() << "expected RealS";
  } catch (const error& e) {
    EXPECT_EQ(e.code(), errc::real_s);
  }
}

TEST(ClosedForm, TwoIndependentKernelVectorsInsideTheDisc) {
  std::mt19937_64 rng(kSeed + 49);
  const std::size_t N = 48;
  for (const WeightRule& w : {WeightRule::ratio(), WeightRule::constant(2.0)}) {
    const double r = rsp(w, 4096).estimate;
    const BandedOperator T = weighted_shift(w);
    const Quaternion s = random_unit_quaternion(rng) * (0.5 * r);
    if (s.abs_im() < 0.05) continue;
    const QMatrix P = pencil(truncate(T, N), s);
    std::vector<QVector> xs;
    for (int t = 0; t < 2; ++t) {
      const QVector x = s_eigvec_closed_form(w, s, random_quaternion(rng), random_quaternion(rng), N);
      const QVector px = P * x;
      for (std::size_t n = 0; n + 2 < N; ++n) EXPECT_LT(px[n].abs(), 1e-10 * x.norm());
      xs.push_back(x);
    }
    EXPECT_EQ(h_rank(xs), 2u);
    EXPECT_EQ(s_point_membership(T, s, N).kernel_dim_H, 2u) << w.name;
  }
}

// ---- rsp -------------------------------------------------------------------------------------

TEST(Rsp, ConstantOne) { EXPECT_EQ(rsp(WeightRule::constant(1.0), 100).estimate, 1.0); }

TEST(Rsp, ConstantTwo) { EXPECT_DOUBLE_EQ(rsp(WeightRule::constant(2.0), 100).estimate, 2.0); }

TEST(Rsp, Telescoping) {
  const RspEstimate r = rsp(WeightRule::ratio(), 10000);
  ASSERT_EQ(r.sequence.size(), 10000u);
  // |w_1 ... w_n| = n + 1
  for (std::size_t n : {1u, 10u, 1000u}) EXPECT_NEAR(r.sequence[n - 1], std::pow(double(n + 1), 1.0 / double(n)), 1e-12);
  EXPECT_LT(std::abs(r.estimate - 1.0), 1e-2);
}

TEST(Rsp, BelowSRadius) {
  for (const WeightRule& w : {WeightRule::ratio(), WeightRule::constant(2.0), WeightRule::listed({2, 1.5, 3, 2.5}),
                              WeightRule::constant(Quaternion(0, 1, 1, 0))}) {
    const double r = rsp(w, 2000).estimate;
    const double s = s_radius_estimate(weighted_shift(w), 64, 32).estimate;
    EXPECT_LE(r, s + 1e-12) << w.name;
  }
}

// ---- probe -----------------------------------------------------------------------------------

TEST(Probe, TwoRegionShift) {
  const auto Ns = doubling_truncations(32);
  const ProbeReport a = bn_probe(tci_operator(), fixtures::tci_omega1_samples(), Ns);
  const ProbeReport b = bn_probe(tci_operator(), fixtures::tci_omega2_samples(), Ns);
  ASSERT_TRUE(a.n.has_value());
  ASSERT_TRUE(b.n.has_value());
  EXPECT_EQ(*a.n, 1u);
  EXPECT_EQ(*b.n, 2u);
  EXPECT_EQ(a.entries.size(), 6u);
  for (bool st : a.sample_stable) EXPECT_TRUE(st);
}

TEST(Probe, OutsideTheDiscIsNotAMember) {
  const std::vector<Quaternion> samples{Quaternion(0, 1.5, 0, 0), Quaternion(1.2, 0.8, 0, 0), Quaternion(0, 0, 2, 0)};
  const ProbeReport r = bn_probe(backward_shift(), samples, doubling_truncations(16));
  ASSERT_TRUE(r.n.has_value());
  EXPECT_EQ(*r.n, 0u);
}

TEST(Probe, NeedsThreeTruncationsAndNonRealSamples) {
  const ProbeReport r = bn_probe(backward_shift(), {Quaternion(0, 0.5, 0, 0)}, {16, 32});
  EXPECT_FALSE(r.n.has_value());
  EXPECT_THROW(bn_probe(backward_shift(), {Quaternion(0.5)}, doubling_truncations(8)), error);
}

}  // namespace
}  // namespace qcd
