#pragma once

#include <qcd/error.hpp>

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <string_view>

namespace qcd {

inline constexpr double default_scalar_tol = 1e-10;

template <class Real>
struct basic_quaternion {
  using value_type = Real;
  using complex_type = std::complex<Real>;

  Real a0{}, a1{}, a2{}, a3{};

  constexpr basic_quaternion() = default;
  constexpr basic_quaternion(Real r) : a0(r) {}  // NOLINT: reals embed implicitly
  constexpr basic_quaternion(Real r, Real i, Real j, Real k) : a0(r), a1(i), a2(j), a3(k) {}
  constexpr basic_quaternion(const complex_type& z) : a0(z.real()), a1(z.imag()) {}  // NOLINT

  static constexpr basic_quaternion unit_i() { return {0, 1, 0, 0}; }
  static constexpr basic_quaternion unit_j() { return {0, 0, 1, 0}; }
  static constexpr basic_quaternion unit_k() { return {0, 0, 0, 1}; }

  constexpr Real re() const { return a0; }
  constexpr basic_quaternion im() const { return {0, a1, a2, a3}; }
  constexpr Real norm_sq() const { return a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3; }
  Real abs() const { return std::sqrt(norm_sq()); }
  Real abs_im() const { return std::sqrt(a1 * a1 + a2 * a2 + a3 * a3); }
  constexpr bool is_real() const { return a1 == 0 && a2 == 0 && a3 == 0; }
  constexpr bool is_complex() const { return a2 == 0 && a3 == 0; }

  // a = z1 + j*z2 with z1 = a0 + a1 i, z2 = a2 - a3 i.
  constexpr complex_type z1() const { return {a0, a1}; }
  constexpr complex_type z2() const { return {a2, -a3}; }
  static constexpr basic_quaternion merge(const complex_type& z1, const complex_type& z2) {
    return {z1.real(), z1.imag(), z2.real(), -z2.imag()};
  }

  constexpr std::array<Real, 4> to_array() const { return {a0, a1, a2, a3}; }

  constexpr basic_quaternion operator-() const { return {-a0, -a1, -a2, -a3}; }
  constexpr basic_quaternion& operator+=(const basic_quaternion& b) {
    a0 += b.a0; a1 += b.a1; a2 += b.a2; a3 += b.a3;
    return *this;
  }
  constexpr basic_quaternion& operator-=(const basic_quaternion& b) {
    a0 -= b.a0; a1 -= b.a1; a2 -= b.a2; a3 -= b.a3;
    return *this;
  }
  constexpr basic_quaternion& operator*=(const basic_quaternion& b) { return *this = *this * b; }
  constexpr basic_quaternion& operator*=(Real s) {
    a0 *= s; a1 *= s; a2 *= s; a3 *= s;
    return *this;
  }
  constexpr basic_quaternion& operator/=(Real s) {
    a0 /= s; a1 /= s; a2 /= s; a3 /= s;
    return *this;
  }

  friend constexpr basic_quaternion operator+(basic_quaternion a, const basic_quaternion& b) { return a += b; }
  friend constexpr basic_quaternion operator-(basic_quaternion a, const basic_quaternion& b) { return a -= b; }
  friend constexpr basic_quaternion operator*(const basic_quaternion& a, const basic_quaternion& b) {
    return {a.a0 * b.a0 - a.a1 * b.a1 - a.a2 * b.a2 - a.a3 * b.a3,
            a.a0 * b.a1 + a.a1 * b.a0 + a.a2 * b.a3 - a.a3 * b.a2,
            a.a0 * b.a2 - a.a1 * b.a3 + a.a2 * b.a0 + a.a3 * b.a1,
            a.a0 * b.a3 + a.a1 * b.a2 - a.a2 * b.a1 + a.a3 * b.a0};
  }
  friend constexpr basic_quaternion operator*(basic_quaternion a, Real s) { return a *= s; }
  friend constexpr basic_quaternion operator*(Real s, basic_quaternion a) { return a *= s; }
  friend constexpr basic_quaternion operator/(basic_quaternion a, Real s) { return a /= s; }
  friend constexpr bool operator==(const basic_quaternion&, const basic_quaternion&) = default;
};

using Quaternion = basic_quaternion<double>;

template <class R>
constexpr basic_quaternion<R> conj(const basic_quaternion<R>& a) {
  return {a.a0, -a.a1, -a.a2, -a.a3};
}

template <class R>
R abs(const basic_quaternion<R>& a) {
  return a.abs();
}

template <class R>
constexpr basic_quaternion<R> mul(const basic_quaternion<R>& a, const basic_quaternion<R>& b) {
  return a * b;
}

template <class R>
basic_quaternion<R> inverse(const basic_quaternion<R>& a) {
  const R n = a.norm_sq();
  if (n == R(0)) throw error(errc::invalid_argument, "inverse of zero quaternion");
  return conj(a) / n;
}

// Max-norm of the difference; handy for tolerance checks.
template <class R>
R dist_inf(const basic_quaternion<R>& a, const basic_quaternion<R>& b) {
  return std::max({std::abs(a.a0 - b.a0), std::abs(a.a1 - b.a1), std::abs(a.a2 - b.a2),
                   std::abs(a.a3 - b.a3)});
}

// e^{i theta}
template <class R = double>
basic_quaternion<R> exp_i(R theta) {
  return {std::cos(theta), std::sin(theta), 0, 0};
}

template <class R>
bool axially_symmetric(const basic_quaternion<R>& p, const basic_quaternion<R>& q,
                       R tol = R(default_scalar_tol)) {
  return std::abs(p.abs() - q.abs()) <= tol && std::abs(p.re() - q.re()) <= tol;
}

// Re(w) + i|Im(w)|
template <class R>
basic_quaternion<R> reduce(const basic_quaternion<R>& w) {
  return {w.a0, w.abs_im(), 0, 0};
}

// Unit w with conj(w) p w = q.
template <class R>
basic_quaternion<R> symmetry_witness(const basic_quaternion<R>& p, const basic_quaternion<R>& q,
                                     R tol = R(default_scalar_tol)) {
  if (!axially_symmetric(p, q, tol))
    throw error(errc::not_symmetric, "quaternions are not axially symmetric");
  const R np = p.abs_im();
  const R nq = q.abs_im();
  if (np <= tol || nq <= tol) return basic_quaternion<R>(1);
  // Unit imaginary axes u, v; we need conj(w) u w = v, i.e. w v conj(w) = u.
  const basic_quaternion<R> u = p.im() / np;
  const basic_quaternion<R> v = q.im() / nq;
  const R dot = u.a1 * v.a1 + u.a2 * v.a2 + u.a3 * v.a3;
  if (dot < R(-1) + R(1e-12)) {
    // Antiparallel: a half turn about an axis orthogonal to u.
    // Axis j unless u is parallel to j, then k; projected orthogonal to u.
    basic_quaternion<R> axis = std::abs(u.a1) + std::abs(u.a3) <= R(1e-12)
                                   ? basic_quaternion<R>::unit_k()
                                   : basic_quaternion<R>::unit_j();
    const R c = axis.a1 * u.a1 + axis.a2 * u.a2 + axis.a3 * u.a3;
    axis = axis - u * c;
    return axis / axis.abs();
  }
  // 1 - u v = (1 + u.v) - u x v, the half-angle rotor taking u to v.
  basic_quaternion<R> w = basic_quaternion<R>(1) - u * v;
  return w / w.abs();
}

// Text form "a0 + a1 i + a2 j + a3 k".
inline std::string format_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

template <class R>
std::string to_string(const basic_quaternion<R>& q) {
  std::string s = format_real(q.a0);
  const R c[3] = {q.a1, q.a2, q.a3};
  const char* unit[3] = {" i", " j", " k"};
  for (int t = 0; t < 3; ++t) {
    const bool neg = std::signbit(c[t]);
    s += neg ? " - " : " + ";
    s += format_real(neg ? -c[t] : c[t]);
    s += unit[t];
  }
  return s;
}

template <class R>
std::ostream& operator<<(std::ostream& os, const basic_quaternion<R>& q) {
  return os << to_string(q);
}

// Parses sums of terms such as "1 + 2ji", "-0.5j", "0.9i", "1 - 2 j + 3 k".
// A term is an optional coefficient followed by a product of units.
inline Quaternion parse_quaternion(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const char* why) -> Quaternion {
    throw error(errc::invalid_argument,
                std::string("cannot parse quaternion '") + std::string(text) + "': " + why);
  };
  Quaternion total;
  bool any = false;
  skip();
  while (pos < text.size()) {
    double sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      if (text[pos] == '-') sign = -1;
      ++pos;
      skip();
    } else if (any) {
      return fail("expected '+' or '-'");
    }
    double coef = 1;
    bool have_coef = false;
    {
      std::size_t end = pos;
      while (end < text.size() && (std::isdigit(static_cast<unsigned char>(text[end])) ||
                                   text[end] == '.' || text[end] == 'e' || text[end] == 'E' ||
                                   ((text[end] == '+' || text[end] == '-') && end > pos &&
                                    (text[end - 1] == 'e' || text[end - 1] == 'E'))))
        ++end;
      if (end > pos) {
        std::string num(text.substr(pos, end - pos));
        char* stop = nullptr;
        coef = std::strtod(num.c_str(), &stop);
        if (stop != num.c_str() + num.size()) return fail("bad number");
        have_coef = true;
        pos = end;
      }
    }
    skip();
    Quaternion unit(1);
    bool have_unit = false;
    while (pos < text.size() && (text[pos] == 'i' || text[pos] == 'j' || text[pos] == 'k' || text[pos] == '*')) {
      if (text[pos] == '*') { ++pos; skip(); continue; }
      const Quaternion u = text[pos] == 'i' ? Quaternion::unit_i()
                           : text[pos] == 'j' ? Quaternion::unit_j()
                                              : Quaternion::unit_k();
      unit = unit * u;
      have_unit = true;
      ++pos;
      skip();
    }
    if (!have_coef && !have_unit) return fail("empty term");
    total += unit * (sign * coef);
    any = true;
    skip();
  }
  if (!any) return fail("empty input");
  return total;
}

}  // namespace qcd
