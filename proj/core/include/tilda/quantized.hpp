#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "tilda/anchor_bank.hpp"
#include "tilda/fixedpoint.hpp"

namespace tilda {

// Quantizes every value of x at `fmt` and returns the raw integers.
std::vector<std::int64_t> quantize_vector(std::span<const double> x, fx::QFormat fmt);

// Fixed-point reference of the classifier. It performs the same arithmetic
// at the same stage formats as the hardware datapath, but as a plain
// algorithm rather than a cycle-stepped machine:
//   weighted distance  d(x, y) * n          at distance_times_counter
//   anchor update      (y * n + x) / (n+1)  through anchor_times_counter,
//                                           anchor_plus_feature and the
//                                           reciprocal LUT
// Distances are always squared Euclidean. Counters saturate at kCounterMax,
// after which the slot is frozen.
class QuantizedBank {
 public:
  // `lut` must outlive the bank.
  explicit QuantizedBank(const TildaConfig& config, const fx::StageFormats& formats = {},
                         const fx::ReciprocalLut& lut = fx::default_reciprocal_lut());

  const TildaConfig& config() const { return config_; }
  const fx::StageFormats& formats() const { return formats_; }

  std::span<const std::int64_t> anchor(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const;
  std::uint64_t counter(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const {
    return counters_[index(c, p, slot)];
  }
  bool trained() const;

  std::uint32_t select_anchor(std::span<const std::int64_t> part, std::uint32_t c,
                              std::uint32_t p) const;

  // x holds T raw values at formats().feature_anchor.
  void learn_quantized(std::span<const std::int64_t> x, std::uint32_t label,
                       std::span<std::uint32_t> chosen_slots = {});
  void learn_one(std::span<const double> x, std::uint32_t label);

  std::uint32_t classify_part(std::span<const std::int64_t> part, std::uint32_t p) const;
  Prediction predict_quantized(std::span<const std::int64_t> x) const;
  Prediction predict(std::span<const double> x) const;
  Prediction predict_group(std::span<const FeatureVector> versions) const;

  // Anchors converted to doubles (exact), with the same counters.
  AnchorBank dequantized() const;
  // Inverse of dequantized(). Throws FormatError when an anchor is not
  // representable at feature_anchor or a counter exceeds kCounterMax.
  void load(const AnchorBank& bank);

 private:
  std::size_t index(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const {
    return (static_cast<std::size_t>(c) * config_.parts + p) * config_.anchors_per_class + slot;
  }

  TildaConfig config_;
  fx::StageFormats formats_;
  const fx::ReciprocalLut* lut_;
  std::vector<std::int64_t> anchors_;
  std::vector<std::uint64_t> counters_;
};

}  // namespace tilda
