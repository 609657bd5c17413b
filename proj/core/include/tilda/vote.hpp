#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace tilda {

struct VoteResult {
  std::uint32_t winner = 0;
  std::vector<std::uint32_t> tallies;
};

// Tally of P one-hot part decisions. The winner is the lowest class index
// reaching the maximum tally. Throws UsageError for out-of-range classes.
VoteResult parallel_vote(std::span<const std::uint32_t> part_classes, std::uint32_t num_classes);

// Accumulates one decision per cycle, as the sequential vote unit does.
class SequentialVote {
 public:
  explicit SequentialVote(std::uint32_t num_classes);

  void push(std::uint32_t cls);
  void reset();
  std::uint32_t count() const { return count_; }
  std::span<const std::uint32_t> tallies() const { return tallies_; }
  // Lowest index with the maximum tally; throws UsageError when empty.
  std::uint32_t winner() const;

 private:
  std::vector<std::uint32_t> tallies_;
  std::uint32_t count_ = 0;
};

// Vote over the R per-version decisions; same tie-break as parallel_vote.
std::uint32_t sequential_vote(std::span<const std::uint32_t> version_classes,
                              std::uint32_t num_classes);

}  // namespace tilda
