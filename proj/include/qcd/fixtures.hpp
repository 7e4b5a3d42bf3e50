#pragma once

// Closed-form sections and sample grids for the two worked operators.

#include <qcd/banded.hpp>
#include <qcd/canonical.hpp>

#include <cmath>
#include <vector>

namespace qcd::fixtures {

// gamma(w) = (1 + (1+j) z, z, z^2, ...), z = w - i
inline Section cndu_section_T(std::size_t N) {
  Section s;
  s.value = [N](cplx w) {
    const cplx z = w - cplx(0, 1);
    QVector v(N);
    v[0] = Quaternion::merge(1.0 + z, z);
    cplx p = z;
    for (std::size_t n = 1; n < N; ++n, p *= z) v[n] = p;
    return v;
  };
  s.derivative = [N](cplx w) {
    const cplx z = w - cplx(0, 1);
    QVector v(N);
    v[0] = Quaternion::merge(1.0, 1.0);
    cplx p = 1;
    for (std::size_t n = 1; n < N; ++n, p *= z) v[n] = p * double(n);
    return v;
  };
  s.norm_sq = [](cplx w) {
    const cplx z = w - cplx(0, 1);
    const double r2 = std::norm(z);
    return Quaternion::merge(1.0 + z, z).norm_sq() + r2 + r2 * r2 / (1 - r2);
  };
  return s;
}

// gamma~(w) = (1 + z, (1+j) z, z^2, ...)
inline Section cndu_section_T_tilde(std::size_t N) {
  Section s;
  s.value = [N](cplx w) {
    const cplx z = w - cplx(0, 1);
    QVector v(N);
    v[0] = 1.0 + z;
    if (N > 1) v[1] = Quaternion::merge(z, z);
    cplx p = z * z;
    for (std::size_t n = 2; n < N; ++n, p *= z) v[n] = p;
    return v;
  };
  s.derivative = [N](cplx w) {
    const cplx z = w - cplx(0, 1);
    QVector v(N);
    v[0] = 1.0;
    if (N > 1) v[1] = Quaternion::merge(1.0, 1.0);
    cplx p = z;
    for (std::size_t n = 2; n < N; ++n, p *= z) v[n] = p * double(n);
    return v;
  };
  s.norm_sq = [](cplx w) {
    const cplx z = w - cplx(0, 1);
    const double r2 = std::norm(z);
    return std::norm(1.0 + z) + Quaternion::merge(z, z).norm_sq() + r2 * r2 / (1 - r2);
  };
  return s;
}

// (1, w, w^2, ..., w^{N-1})
inline Section szego_section(std::size_t N) {
  Section s;
  s.value = [N](cplx w) {
    QVector v(N);
    cplx p = 1;
    for (std::size_t n = 0; n < N; ++n, p *= w) v[n] = p;
    return v;
  };
  s.derivative = [N](cplx w) {
    QVector v(N);
    cplx p = 1;
    for (std::size_t n = 1; n < N; ++n, p *= w) v[n] = p * double(n);
    return v;
  };
  s.norm_sq = [N](cplx w) {
    const double r2 = std::norm(w);
    return (1 - std::pow(r2, double(N))) / (1 - r2);
  };
  return s;
}

// 21 x 21 lattice over [-0.5, 0.5] x [0.5, 1.5] restricted to |w - i| <= 0.5, Im w > 0.5.
inline std::vector<cplx> cndu_grid(std::size_t steps = 21) {
  std::vector<cplx> pts;
  for (std::size_t b = 0; b < steps; ++b)
    for (std::size_t a = 0; a < steps; ++a) {
      const double re = -0.5 + double(a) / double(steps - 1);
      const double im = 0.5 + double(b) / double(steps - 1);
      const cplx w(re, im);
      if (std::abs(w - cplx(0, 1)) <= 0.5 + 1e-12 && im > 0.5 + 1e-12) pts.push_back(w);
    }
  return pts;
}

// steps x steps lattice over the square around center, restricted to the closed disc.
inline std::vector<cplx> disc_grid(cplx center, double radius, std::size_t steps) {
  std::vector<cplx> pts;
  if (steps < 2) return {center};
  for (std::size_t b = 0; b < steps; ++b)
    for (std::size_t a = 0; a < steps; ++a) {
      const cplx w = center + cplx(-radius + 2 * radius * double(a) / double(steps - 1),
                                   -radius + 2 * radius * double(b) / double(steps - 1));
      if (std::abs(w - center) <= radius + 1e-12) pts.push_back(w);
    }
  return pts;
}

inline bool in_tci_omega1(cplx z) {
  return std::abs(z - cplx(0, 0.5)) < 1 && std::abs(z + cplx(0, 0.5)) > 1 && z.imag() > 0;
}
inline bool in_tci_omega2(cplx z) {
  return std::abs(z - cplx(0, 0.5)) < 1 && std::abs(z + cplx(0, 0.5)) < 1 && z.imag() > 0;
}

// Lattice points of a region keeping a margin from its boundary circles and the real axis.
inline std::vector<Quaternion> tci_grid(int region, double margin = 0.1) {
  std::vector<Quaternion> pts;
  for (int b = 1; b <= 7; ++b)
    for (int a = -3; a <= 3; ++a) {
      const cplx z(0.2 * a, 0.2 * b);
      const double d1 = std::abs(std::abs(z - cplx(0, 0.5)) - 1);
      const double d2 = std::abs(std::abs(z + cplx(0, 0.5)) - 1);
      if (d1 < margin || d2 < margin || z.imag() < margin) continue;
      if (region == 1 ? in_tci_omega1(z) : in_tci_omega2(z)) pts.emplace_back(z);
    }
  return pts;
}

inline const std::vector<Quaternion>& tci_omega1_samples() {
  static const std::vector<Quaternion> s{Quaternion(0, 0.9, 0, 0), Quaternion(0.2, 0.7, 0, 0)};
  return s;
}
inline const std::vector<Quaternion>& tci_omega2_samples() {
  static const std::vector<Quaternion> s{Quaternion(0, 0.4, 0, 0), Quaternion(0.1, 0.3, 0, 0)};
  return s;
}

}  // namespace qcd::fixtures
