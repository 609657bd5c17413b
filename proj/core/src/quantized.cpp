#include "tilda/quantized.hpp"

#include <string>

#include "tilda/vote.hpp"

namespace tilda {

std::vector<std::int64_t> quantize_vector(std::span<const double> x, fx::QFormat fmt) {
  std::vector<std::int64_t> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = fx::quantize(x[i], fmt).raw;
  return out;
}

QuantizedBank::QuantizedBank(const TildaConfig& config, const fx::StageFormats& formats,
                             const fx::ReciprocalLut& lut)
    : config_(config), formats_(formats), lut_(&lut) {
  config_.validate();
  const std::size_t slots =
      static_cast<std::size_t>(config_.classes) * config_.parts * config_.anchors_per_class;
  anchors_.assign(slots * config_.part_dim(), 0);
  counters_.assign(slots, 0);
}

std::span<const std::int64_t> QuantizedBank::anchor(std::uint32_t c, std::uint32_t p,
                                                    std::uint32_t slot) const {
  const std::size_t len = config_.part_dim();
  return std::span<const std::int64_t>(anchors_).subspan(index(c, p, slot) * len, len);
}

bool QuantizedBank::trained() const {
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t s = 0; s < config_.anchors_per_class; ++s) {
      if (counter(c, 0, s) > 0) return true;
    }
  }
  return false;
}

std::uint32_t QuantizedBank::select_anchor(std::span<const std::int64_t> part, std::uint32_t c,
                                           std::uint32_t p) const {
  std::uint32_t best = 0;
  std::int64_t best_raw = 0;
  for (std::uint32_t i = 0; i < config_.anchors_per_class; ++i) {
    const auto d = fx::squared_distance(part, anchor(c, p, i), formats_.feature_anchor,
                                        formats_.distance);
    const auto w = fx::mul_counter(d, counter(c, p, i), formats_.distance_times_counter);
    if (i == 0 || w.raw < best_raw) {
      best = i;
      best_raw = w.raw;
    }
  }
  return best;
}

void QuantizedBank::learn_quantized(std::span<const std::int64_t> x, std::uint32_t label,
                                    std::span<std::uint32_t> chosen_slots) {
  if (x.size() != config_.dim) throw ConfigError("feature vector length mismatch");
  if (label >= config_.classes) throw UsageError("label " + std::to_string(label) + " out of range");
  const std::size_t len = config_.part_dim();
  const auto fa = formats_.feature_anchor;
  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    const auto xp = x.subspan(p * len, len);
    const std::uint32_t slot = select_anchor(xp, label, p);
    if (!chosen_slots.empty()) chosen_slots[p] = slot;
    auto& n = counters_[index(label, p, slot)];
    if (n >= fx::kCounterMax) continue;  // frozen
    std::int64_t* y = anchors_.data() + index(label, p, slot) * len;
    for (std::size_t j = 0; j < len; ++j) {
      const auto weighted = fx::mul_counter(fx::Fixed{y[j], fa}, n, formats_.anchor_times_counter);
      const auto sum = fx::add(weighted, fx::Fixed{xp[j], fa}, formats_.anchor_plus_feature);
      y[j] = fx::div_by_counter(sum, n + 1, *lut_, fa).raw;
    }
    ++n;
  }
}

void QuantizedBank::learn_one(std::span<const double> x, std::uint32_t label) {
  learn_quantized(quantize_vector(x, formats_.feature_anchor), label);
}

std::uint32_t QuantizedBank::classify_part(std::span<const std::int64_t> part,
                                           std::uint32_t p) const {
  bool found = false;
  std::uint32_t best_class = 0;
  std::int64_t best_raw = 0;
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t s = 0; s < config_.anchors_per_class; ++s) {
      if (counter(c, p, s) == 0) continue;
      const auto d = fx::squared_distance(part, anchor(c, p, s), formats_.feature_anchor,
                                          formats_.distance);
      if (!found || d.raw < best_raw) {
        found = true;
        best_raw = d.raw;
        best_class = c;
      }
    }
  }
  if (!found) throw UntrainedModelError("untrained model: part " + std::to_string(p) + " is empty");
  return best_class;
}

Prediction QuantizedBank::predict_quantized(std::span<const std::int64_t> x) const {
  if (!trained()) throw UntrainedModelError();
  if (x.size() != config_.dim) throw ConfigError("feature vector length mismatch");
  const std::size_t len = config_.part_dim();
  Prediction out;
  out.part_classes.resize(config_.parts);
  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    out.part_classes[p] = classify_part(x.subspan(p * len, len), p);
  }
  auto vote = parallel_vote(out.part_classes, config_.classes);
  out.part_tallies = std::move(vote.tallies);
  out.final_class = vote.winner;
  return out;
}

Prediction QuantizedBank::predict(std::span<const double> x) const {
  return predict_quantized(quantize_vector(x, formats_.feature_anchor));
}

Prediction QuantizedBank::predict_group(std::span<const FeatureVector> versions) const {
  if (versions.empty()) throw UsageError("empty augmentation group");
  if (versions.size() == 1) return predict(versions.front().values);
  SequentialVote seq(config_.classes);
  Prediction first;
  for (std::size_t r = 0; r < versions.size(); ++r) {
    auto pr = predict(versions[r].values);
    seq.push(pr.final_class);
    if (r == 0) first = std::move(pr);
  }
  first.final_class = seq.winner();
  first.votes_over_versions.emplace(seq.tallies().begin(), seq.tallies().end());
  return first;
}

AnchorBank QuantizedBank::dequantized() const {
  std::vector<double> values(anchors_.size());
  for (std::size_t i = 0; i < anchors_.size(); ++i) {
    values[i] = fx::dequantize(fx::Fixed{anchors_[i], formats_.feature_anchor});
  }
  return AnchorBank(config_, std::move(values), counters_);
}

void QuantizedBank::load(const AnchorBank& bank) {
  const auto& bc = bank.config();
  if (bc.dim != config_.dim || bc.parts != config_.parts || bc.classes != config_.classes ||
      bc.anchors_per_class != config_.anchors_per_class) {
    throw ConfigError("anchor bank shape does not match the quantized bank");
  }
  const auto values = bank.anchors();
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto q = fx::quantize(values[i], formats_.feature_anchor);
    if (fx::dequantize(q) != values[i]) throw FormatError("anchor value not representable at feature_anchor format");
    anchors_[i] = q.raw;
  }
  const auto counters = bank.counters();
  for (std::size_t i = 0; i < counters.size(); ++i) {
    if (counters[i] > fx::kCounterMax) throw FormatError("counter exceeds 18-bit range");
    counters_[i] = counters[i];
  }
}

}  // namespace tilda
