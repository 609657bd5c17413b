#include "tilda/vote.hpp"

#include <algorithm>
#include <string>

#include "tilda/errors.hpp"

namespace tilda {

namespace {

std::uint32_t argmax_lowest(std::span<const std::uint32_t> tallies) {
  std::uint32_t best = 0;
  for (std::uint32_t c = 1; c < tallies.size(); ++c) {
    if (tallies[c] > tallies[best]) best = c;
  }
  return best;
}

}  // namespace

VoteResult parallel_vote(std::span<const std::uint32_t> part_classes, std::uint32_t num_classes) {
  if (num_classes == 0) throw UsageError("vote over zero classes");
  VoteResult out;
  out.tallies.assign(num_classes, 0);
  for (auto c : part_classes) {
    if (c >= num_classes) throw UsageError("class " + std::to_string(c) + " out of range");
    ++out.tallies[c];
  }
  out.winner = argmax_lowest(out.tallies);
  return out;
}

SequentialVote::SequentialVote(std::uint32_t num_classes) : tallies_(num_classes, 0) {
  if (num_classes == 0) throw UsageError("vote over zero classes");
}

void SequentialVote::push(std::uint32_t cls) {
  if (cls >= tallies_.size()) throw UsageError("class " + std::to_string(cls) + " out of range");
  ++tallies_[cls];
  ++count_;
}

void SequentialVote::reset() {
  std::fill(tallies_.begin(), tallies_.end(), 0U);
  count_ = 0;
}

std::uint32_t SequentialVote::winner() const {
  if (count_ == 0) throw UsageError("sequential vote has no decisions");
  return argmax_lowest(tallies_);
}

std::uint32_t sequential_vote(std::span<const std::uint32_t> version_classes,
                              std::uint32_t num_classes) {
  SequentialVote v(num_classes);
  for (auto c : version_classes) v.push(c);
  return v.winner();
}

}  // namespace tilda
