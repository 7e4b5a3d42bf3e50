#pragma once

#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/quaternion.hpp>

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <string>
#include <utility>
#include <vector>

namespace qcd {

// n -> w_n for n >= 1, with a declared bound sup |w_n|.
struct WeightRule {
  std::function<Quaternion(std::size_t)> w;
  double bound = std::numeric_limits<double>::infinity();
  std::string name;

  Quaternion operator()(std::size_t n) const { return w(n); }

  static WeightRule constant(const Quaternion& c) {
    return {[c](std::size_t) { return c; }, c.abs(), "const:" + to_string(c)};
  }
  // (n+1)/n
  static WeightRule ratio() {
    return {[](std::size_t n) { return Quaternion(double(n + 1) / double(n)); }, 2.0, "ratio"};
  }
  // Listed weights; the last one repeats past the end.
  static WeightRule listed(std::vector<Quaternion> ws, std::string name = "custom") {
    if (ws.empty()) throw error(errc::invalid_argument, "empty weight list");
    double b = 0;
    for (const auto& q : ws) b = std::max(b, q.abs());
    return {[ws = std::move(ws)](std::size_t n) { return ws[std::min(n, ws.size()) - 1]; }, b,
            std::move(name)};
  }
};

// Constant diagonal + superdiagonal weights (T e_{n+1} = e_n w_n) + a finite top-left patch.
struct BandedOperator {
  Quaternion diag;
  WeightRule weights = WeightRule::constant(1.0);
  std::map<std::pair<std::size_t, std::size_t>, Quaternion> patch;
  std::string name;

  bool bounded() const { return std::isfinite(weights.bound); }

  std::size_t patch_extent() const {
    std::size_t e = 0;
    for (const auto& [rc, q] : patch) e = std::max({e, rc.first + 1, rc.second + 1});
    return e;
  }

  // Largest c - r over nonzero entries (at least 1 for the shift part).
  std::size_t upper_bandwidth() const {
    std::size_t b = 1;
    for (const auto& [rc, q] : patch)
      if (rc.second > rc.first && !(q == Quaternion())) b = std::max(b, rc.second - rc.first);
    return b;
  }

  Quaternion entry(std::size_t r, std::size_t c) const {
    if (auto it = patch.find({r, c}); it != patch.end()) return it->second;
    if (r == c) return diag;
    if (c == r + 1) return weights(c);  // column c = n + 1 (1-based) carries w_n at row n
    return {};
  }
};

inline QMatrix truncate(const BandedOperator& T, std::size_t N) {
  if (N < T.patch_extent())
    throw error(errc::patch_too_large,
                "truncation " + std::to_string(N) + " smaller than patch extent " +
                    std::to_string(T.patch_extent()));
  QMatrix A(N, N);
  for (std::size_t r = 0; r < N; ++r) {
    A(r, r) = T.entry(r, r);
    if (r + 1 < N) A(r, r + 1) = T.entry(r, r + 1);
  }
  for (const auto& [rc, q] : T.patch)
    if (rc.first < N && rc.second < N) A(rc.first, rc.second) = q;
  return A;
}

// ---- operators used throughout -------------------------------------------------

inline BandedOperator weighted_shift(const WeightRule& w, std::string name = "shift") {
  return {Quaternion(), w, {}, std::move(name)};
}

inline BandedOperator backward_shift() { return weighted_shift(WeightRule::constant(1.0)); }

// Backward shift plus (i/2) I.
inline BandedOperator tci_operator() {
  return {Quaternion(0, 0.5, 0, 0), WeightRule::constant(1.0), {}, "tci"};
}

inline BandedOperator cndu_T() {
  const Quaternion i = Quaternion::unit_i(), j = Quaternion::unit_j();
  BandedOperator T{i, WeightRule::constant(1.0), {}, "cndu-T"};
  T.patch[{0, 1}] = Quaternion(1) + 2.0 * (j * i);
  T.patch[{0, 2}] = Quaternion(1) + j;
  return T;
}

inline BandedOperator cndu_T_tilde() {
  const Quaternion i = Quaternion::unit_i(), j = Quaternion::unit_j();
  BandedOperator T{i, WeightRule::constant(1.0), {}, "cndu-T-tilde"};
  T.patch[{0, 1}] = Quaternion(0.5) - 0.5 * j;
  T.patch[{0, 2}] = Quaternion(1);
  T.patch[{1, 1}] = j * i;
  T.patch[{1, 2}] = Quaternion(1) + j;
  return T;
}

}  // namespace qcd
