#pragma once

// Test-only reference computations. Nothing here calls into the code paths
// under test except for plain accessors.

#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "tilda/anchor_bank.hpp"
#include "tilda/fixedpoint.hpp"

namespace tilda::oracle {

using BigInt = boost::multiprecision::cpp_int;

// Exact value numerator / 2^frac_bits.
struct ExactValue {
  BigInt numerator;
  int frac_bits = 0;
};

inline ExactValue exact_of(const fx::Fixed& a) { return {BigInt(a.raw), a.fmt.frac_bits()}; }

inline ExactValue exact_of(double x) {
  int exp = 0;
  const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
  const auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  // x = m * 2^(exp - 53)
  const int e = exp - 53;
  if (e >= 0) return {BigInt(m) << e, 0};
  return {BigInt(m), -e};
}

inline ExactValue exact_add(const ExactValue& a, const ExactValue& b) {
  const int f = std::max(a.frac_bits, b.frac_bits);
  return {(a.numerator << (f - a.frac_bits)) + (b.numerator << (f - b.frac_bits)), f};
}

inline ExactValue exact_mul(const ExactValue& a, const ExactValue& b) {
  return {a.numerator * b.numerator, a.frac_bits + b.frac_bits};
}

// Round-half-away-from-zero of value * 2^out_frac by long division.
// Returns nullopt when the result falls outside the format.
inline std::optional<std::int64_t> oracle_quantize(const ExactValue& v, fx::QFormat out) {
  BigInt target = v.numerator;
  BigInt divisor = 1;
  const int shift = out.frac_bits() - v.frac_bits;
  if (shift >= 0) {
    target <<= shift;
  } else {
    divisor <<= -shift;
  }
  const bool neg = target < 0;
  BigInt mag = neg ? BigInt(-target) : target;
  BigInt q = mag / divisor;
  const BigInt rem = mag % divisor;
  if (2 * rem >= divisor) q += 1;
  if (neg) q = -q;
  if (q > BigInt(out.max_raw()) || q < BigInt(out.min_raw())) return std::nullopt;
  return static_cast<std::int64_t>(q);
}

// Histogram then lowest-index argmax.
inline std::uint32_t histogram_argmax(std::span<const std::uint32_t> labels, std::uint32_t classes) {
  std::vector<std::uint32_t> hist(classes, 0);
  for (auto l : labels) hist.at(l) += 1;
  std::uint32_t best_count = 0;
  for (auto h : hist) best_count = std::max(best_count, h);
  for (std::uint32_t c = 0; c < classes; ++c) {
    if (hist[c] == best_count) return c;
  }
  return 0;
}

inline double sq_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return s;
}

inline double metric_dist(std::span<const double> a, std::span<const double> b, Metric m) {
  const double s = sq_dist(a, b);
  return m == Metric::l2 ? std::sqrt(s) : s;
}

// Evaluates R_i = d_i * n_i for every slot and keeps the first minimum.
inline std::uint32_t brute_force_select(const AnchorBank& bank, std::span<const double> xp,
                                        std::uint32_t c, std::uint32_t p) {
  const auto& cfg = bank.config();
  std::vector<double> scores;
  for (std::uint32_t i = 0; i < cfg.anchors_per_class; ++i) {
    scores.push_back(metric_dist(xp, bank.anchor(c, p, i), cfg.metric) *
                     static_cast<double>(bank.counter(c, p, i)));
  }
  const double best = *std::min_element(scores.begin(), scores.end());
  for (std::uint32_t i = 0; i < scores.size(); ++i) {
    if (scores[i] == best) return i;
  }
  return 0;
}

// Nearest non-empty anchor in part p by exhaustive scan; ties to lowest
// (class, slot).
inline std::optional<std::uint32_t> brute_force_part_class(const AnchorBank& bank,
                                                           std::span<const double> xp,
                                                           std::uint32_t p) {
  const auto& cfg = bank.config();
  std::vector<std::pair<double, std::uint32_t>> cands;
  for (std::uint32_t c = 0; c < cfg.classes; ++c) {
    for (std::uint32_t s = 0; s < cfg.anchors_per_class; ++s) {
      if (bank.counter(c, p, s) > 0) cands.emplace_back(metric_dist(xp, bank.anchor(c, p, s), cfg.metric), c);
    }
  }
  if (cands.empty()) return std::nullopt;
  // stable: first occurrence of the minimum distance
  auto best = cands.front();
  for (const auto& cd : cands) {
    if (cd.first < best.first) best = cd;
  }
  return best.second;
}

// Monolithic re-implementation of split + nearest anchor + majority vote.
inline std::uint32_t monolithic_predict(const AnchorBank& bank, const std::vector<double>& x) {
  const auto& cfg = bank.config();
  const std::size_t len = cfg.dim / cfg.parts;
  std::vector<std::uint32_t> votes(cfg.classes, 0);
  for (std::uint32_t p = 0; p < cfg.parts; ++p) {
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t cls = 0;
    for (std::uint32_t c = 0; c < cfg.classes; ++c) {
      for (std::uint32_t s = 0; s < cfg.anchors_per_class; ++s) {
        if (bank.counter(c, p, s) == 0) continue;
        const auto y = bank.anchor(c, p, s);
        double d = 0.0;
        for (std::size_t j = 0; j < len; ++j) d += (x[p * len + j] - y[j]) * (x[p * len + j] - y[j]);
        if (d < best) {
          best = d;
          cls = c;
        }
      }
    }
    votes[cls] += 1;
  }
  std::uint32_t winner = 0;
  for (std::uint32_t c = 1; c < cfg.classes; ++c) {
    if (votes[c] > votes[winner]) winner = c;
  }
  return winner;
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
  std::normal_distribution<double> nd(0.0, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = nd(rng);
  return v;
}

inline FeatureVector random_example(std::mt19937_64& rng, const TildaConfig& cfg, double scale = 1.0) {
  std::uniform_int_distribution<std::uint32_t> lab(0, cfg.classes - 1);
  return FeatureVector{random_vector(rng, cfg.dim, scale), lab(rng), 0};
}

}  // namespace tilda::oracle

namespace tilda::oracle {

// Saturating variant for nonnegative quantities.
inline std::int64_t oracle_quantize_sat(const ExactValue& v, fx::QFormat out) {
  if (auto q = oracle_quantize(v, out)) return *q;
  return v.numerator < 0 ? out.min_raw() : out.max_raw();
}

// Squared distance of raw vectors at `in`, rounded once into `dist`.
inline std::int64_t oracle_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                    fx::QFormat in, fx::QFormat dist) {
  BigInt acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const BigInt d = BigInt(a[i]) - BigInt(b[i]);
    acc += d * d;
  }
  return oracle_quantize_sat({acc, 2 * in.frac_bits()}, dist);
}

// Counter-weighted distance as compared during learning.
inline std::int64_t oracle_weighted(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                                    std::uint64_t n, const fx::StageFormats& f) {
  const auto d = oracle_distance(a, b, f.feature_anchor, f.distance);
  return oracle_quantize_sat({BigInt(d) * n, f.distance.frac_bits()}, f.distance_times_counter);
}

}  // namespace tilda::oracle
