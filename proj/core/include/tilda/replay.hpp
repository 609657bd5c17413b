#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "tilda/anchor_bank.hpp"

namespace tilda {

// Record of every (example, part, slot) assignment made during training,
// kept with the example values so anchors can be recomputed from scratch.
class TrainingLog {
 public:
  struct Entry {
    std::uint32_t label = 0;
    std::vector<std::uint32_t> slots;  // one per part
    std::vector<double> values;        // the full feature vector
  };

  TrainingLog() = default;
  TrainingLog(std::uint32_t dim, std::uint32_t parts) : dim_(dim), parts_(parts) {}

  std::uint32_t dim() const { return dim_; }
  std::uint32_t parts() const { return parts_; }
  std::span<const Entry> entries() const { return entries_; }
  std::vector<Entry>& mutable_entries() { return entries_; }

  // Throws UsageError when the entry shape disagrees with (dim, parts).
  void append(std::uint32_t label, std::span<const std::uint32_t> slots,
              std::span<const double> values);

  // "TLLG" format: magic, version u32, T u32, P u32, count u64, then per
  // entry: label u32, P slots u32, T values f64.
  void save(const std::filesystem::path& path) const;
  static TrainingLog load(const std::filesystem::path& path);

 private:
  std::uint32_t dim_ = 0;
  std::uint32_t parts_ = 0;
  std::vector<Entry> entries_;
};

struct ReplayMismatch {
  std::uint32_t cls = 0;
  std::uint32_t part = 0;
  std::uint32_t slot = 0;
  std::uint64_t expected_count = 0;
  std::uint64_t actual_count = 0;
};

struct ReplayReport {
  double max_relative_error = 0.0;
  std::vector<ReplayMismatch> counter_mismatches;
  // Slots whose anchor error exceeds the tolerance passed to replay_verify.
  std::vector<ReplayMismatch> anchor_mismatches;
  std::size_t entries = 0;

  bool passed() const { return counter_mismatches.empty() && anchor_mismatches.empty(); }
  std::string summary() const;
};

// Rebuilds each anchor as the plain mean of the subvectors the log assigns
// to it and compares against the bank. Relative error is measured per
// anchor as ||stored - replayed|| / ||replayed||. Throws UsageError when
// the log shape does not match the bank.
ReplayReport replay_verify(const AnchorBank& bank, const TrainingLog& log,
                           double tolerance = 1e-9);

}  // namespace tilda
