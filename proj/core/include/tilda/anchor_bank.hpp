#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <ranges>
#include <span>
#include <vector>

#include "tilda/config.hpp"
#include "tilda/errors.hpp"

namespace tilda {

class TrainingLog;

// P contiguous slices of equal length. Throws ConfigError on a dimension
// mismatch.
std::vector<std::span<const double>> split(std::span<const double> x, const TildaConfig& config);

double distance(std::span<const double> a, std::span<const double> b, Metric metric);

struct Prediction {
  std::vector<std::uint32_t> part_classes;
  std::vector<std::uint32_t> part_tallies;
  std::uint32_t final_class = 0;
  // Tallies of the second vote; set by predict_group when R > 1.
  std::optional<std::vector<std::uint32_t>> votes_over_versions;
};

// Floating-point anchor bank: k running means per (class, part) and their
// counters. Anchors are stored as means, so prediction reads them directly.
class AnchorBank {
 public:
  explicit AnchorBank(const TildaConfig& config);

  // Takes ownership of raw storage in (class, part, slot, dim) and
  // (class, part, slot) order. Throws FormatError on a size mismatch.
  AnchorBank(const TildaConfig& config, std::vector<double> anchors,
             std::vector<std::uint64_t> counters);

  const TildaConfig& config() const { return config_; }

  std::span<const double> anchor(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const;
  std::uint64_t counter(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const {
    return counters_[index(c, p, slot)];
  }
  std::span<const double> anchors() const { return anchors_; }
  std::span<const std::uint64_t> counters() const { return counters_; }

  bool trained() const;

  // Slot minimising distance * counter; lowest index on ties.
  std::uint32_t select_anchor(std::span<const double> part, std::uint32_t c, std::uint32_t p) const;

  // One streaming update. When `chosen_slots` is non-empty it must have P
  // entries and receives the slot updated in each part.
  void learn_one(std::span<const double> x, std::uint32_t label,
                 std::span<std::uint32_t> chosen_slots = {});
  // Throws UsageError when x carries no label.
  void learn_one(const FeatureVector& x, TrainingLog* log = nullptr);

  // Nearest non-empty anchor in part p, unweighted. Throws
  // UntrainedModelError when the part holds no anchor yet.
  std::uint32_t classify_part(std::span<const double> part, std::uint32_t p) const;

  Prediction predict(std::span<const double> x) const;
  // All versions must share one group id. Throws UsageError on an empty group.
  Prediction predict_group(std::span<const FeatureVector> versions) const;

  // "TLDB" format: magic, version u32, T P C k u32, anchors f64, counters u64.
  void write(std::ostream& os) const;
  static AnchorBank read(std::istream& is);
  void save(const std::filesystem::path& path) const;
  static AnchorBank load(const std::filesystem::path& path);

  friend bool operator==(const AnchorBank&, const AnchorBank&) = default;

 private:
  std::size_t index(std::uint32_t c, std::uint32_t p, std::uint32_t slot) const {
    return (static_cast<std::size_t>(c) * config_.parts + p) * config_.anchors_per_class + slot;
  }
  std::span<double> anchor_mut(std::uint32_t c, std::uint32_t p, std::uint32_t slot);

  TildaConfig config_;
  std::vector<double> anchors_;
  std::vector<std::uint64_t> counters_;
};

inline constexpr std::uint32_t kBankFormatVersion = 1;

// Feeds each element of a single-pass range to learn_one exactly once.
// Elements must be FeatureVector-like (convertible to const FeatureVector&).
template <std::ranges::input_range Stream>
std::size_t learn_stream(AnchorBank& bank, Stream&& stream, TrainingLog* log = nullptr) {
  std::size_t n = 0;
  for (auto&& example : stream) {
    bank.learn_one(static_cast<const FeatureVector&>(example), log);
    ++n;
  }
  return n;
}

}  // namespace tilda
