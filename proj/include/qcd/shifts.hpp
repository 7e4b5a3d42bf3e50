#pragma once

#include <qcd/banded.hpp>
#include <qcd/error.hpp>
#include <qcd/qmatrix.hpp>
#include <qcd/spectra.hpp>

#include <cmath>
#include <optional>
#include <vector>

namespace qcd {

struct Positivized {
  QMatrix X;         // diagonal unitary with T X = X T~
  WeightRule wabs;   // n -> |w_n|
};

inline Positivized positivize(const WeightRule& w, std::size_t N) {
  Positivized out;
  out.X = QMatrix(N, N);
  Quaternion acc(1);  // conj(w_{n-1}) ... conj(w_1) / |...|
  for (std::size_t k = 0; k < N; ++k) {
    if (k > 0) {
      const Quaternion wk = w(k);
      const double a = wk.abs();
      if (a == 0) throw error(errc::zero_weight, "weight w_" + std::to_string(k) + " vanishes");
      acc = conj(wk) * acc / a;
    }
    out.X(k, k) = acc;
  }
  out.wabs = {[w](std::size_t n) { return Quaternion(w(n).abs()); }, w.bound, "abs(" + w.name + ")"};
  return out;
}

// Lemma BUSEV: two-parameter family of pencil-kernel vectors of a positive weighted shift.
inline QVector s_eigvec_closed_form(const WeightRule& w, const Quaternion& s, const Quaternion& x1,
                                    const Quaternion& x2, std::size_t N) {
  if (s.abs_im() == 0) throw error(errc::real_s, "s must be non-real");
  if (N == 0) return QVector();
  QVector x(N);
  x[0] = x1;
  if (N == 1) return x;
  x[1] = x2;
  const Quaternion sb = conj(s);
  const Quaternion dinv = inverse(s - sb);
  const Quaternion w1 = w(1);
  double wprod = w1.re();
  if (!w1.is_real() || w1.re() <= 0) throw error(errc::invalid_argument, "weights must be positive");
  Quaternion sn = s, sbn = sb;  // s^n, conj(s)^n
  for (std::size_t n = 2; n < N; ++n) {
    const Quaternion wn = w(n);
    if (!wn.is_real() || wn.re() <= 0) throw error(errc::invalid_argument, "weights must be positive");
    wprod *= wn.re();
    sn = sn * s;
    sbn = sbn * sb;
    const Quaternion a = (sn - sbn) * dinv;
    const Quaternion b = (sn * sb - s * sbn) * dinv;
    x[n] = (a * w1 * x2 - b * x1) / wprod;
  }
  return x;
}

struct RspEstimate {
  double estimate = 0;
  std::vector<double> sequence;  // |w_1 ... w_n|^{1/n}, n = 1..n_max
};

// Running minimum over the last half of the sampled range.
inline RspEstimate rsp(const WeightRule& w, std::size_t n_max) {
  if (n_max < 1) throw error(errc::invalid_argument, "n_max must be >= 1");
  RspEstimate out;
  out.sequence.reserve(n_max);
  double sum = 0, comp = 0;  // Neumaier-compensated sum of log2|w_k|
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double l = std::log2(w(n).abs());
    const double t = sum + l;
    if (std::isfinite(t)) {
      comp += std::abs(sum) >= std::abs(l) ? (sum - t) + l : (l - t) + sum;
      sum = t;
    } else {
      sum = t;
      comp = 0;
    }
    out.sequence.push_back(std::exp2((sum + comp) / double(n)));
  }
  const std::size_t from = n_max / 2;  // 0-based start of the tail
  double m = out.sequence[from];
  for (std::size_t k = from; k < n_max; ++k) m = std::min(m, out.sequence[k]);
  out.estimate = m;
  return out;
}

struct ProbeEntry {
  Quaternion s;
  std::size_t N = 0;
  std::size_t kernel_dim_H = 0;
  double sigma_min = 0;
  double surjectivity = 0;
  std::string diagnostic;
};

struct ProbeReport {
  std::vector<ProbeEntry> entries;
  std::vector<bool> sample_stable;  // kernel_dim_H constant over the truncations, per sample
  std::optional<std::size_t> n;     // common stable kernel dimension, when there is one
};

inline std::vector<std::size_t> doubling_truncations(std::size_t N) { return {N, 2 * N, 4 * N}; }

inline ProbeReport bn_probe(const BandedOperator& T, const std::vector<Quaternion>& samples,
                            const std::vector<std::size_t>& N_list, SectionOptions opt = {}) {
  ProbeReport rep;
  std::optional<std::size_t> common;
  bool all = !samples.empty() && N_list.size() >= 3;
  for (const auto& s : samples) {
    if (s.abs_im() == 0) throw error(errc::real_s, "probe samples must be non-real");
    std::optional<std::size_t> dim;
    bool stable = true;
    for (std::size_t N : N_list) {
      const PencilResult r = s_point_membership(T, s, N, opt);
      rep.entries.push_back({s, N, r.kernel_dim_H, r.sigma_min, r.surjectivity, r.diagnostic});
      if (!r.diagnostic.empty()) stable = false;
      if (dim && *dim != r.kernel_dim_H) stable = false;
      dim = r.kernel_dim_H;
    }
    stable = stable && N_list.size() >= 3;
    rep.sample_stable.push_back(stable);
    if (!stable || (common && dim && *common != *dim)) all = false;
    if (!common) common = dim;
  }
  if (all) rep.n = common;
  return rep;
}

}  // namespace qcd
