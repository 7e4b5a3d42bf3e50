#pragma once

#include <qcd/qcd.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

namespace qcd::test {

inline constexpr std::uint64_t kSeed = 20240611;

inline ::testing::AssertionResult QNear(const Quaternion& a, const Quaternion& b, double tol) {
  const double d = dist_inf(a, b);
  if (d <= tol) return ::testing::AssertionSuccess();
  return ::testing::AssertionFailure() << to_string(a) << " vs " << to_string(b) << " (|diff| = " << d << ")";
}

inline double max_dist(const QMatrix& A, const QMatrix& B) { return (A - B).max_abs(); }

inline double max_dist(const QVector& a, const QVector& b) {
  double m = 0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, dist_inf(a[i], b[i]));
  return m;
}

// Random holomorphic cubic with |f(w0)| >= 0.5.
inline std::vector<cplx> random_cubic(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  std::vector<cplx> p(4);
  do
    for (auto& c : p) c = cplx(g(rng), g(rng));
  while (std::abs(p[0]) < 0.5);
  return p;
}

inline cplx poly_eval(const std::vector<cplx>& p, cplx z) {
  cplx s = 0;
  for (auto it = p.rbegin(); it != p.rend(); ++it) s = s * z + *it;
  return s;
}

inline cplx poly_deriv(const std::vector<cplx>& p, cplx z) {
  cplx s = 0;
  for (std::size_t l = p.size(); l-- > 1;) s = s * z + p[l] * double(l);
  return s;
}

}  // namespace qcd::test
