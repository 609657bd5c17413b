#include "tilda/anchor_bank.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "tilda/binary_io.hpp"
#include "tilda/replay.hpp"
#include "tilda/vote.hpp"

namespace tilda {

std::vector<std::span<const double>> split(std::span<const double> x, const TildaConfig& config) {
  config.validate();
  if (x.size() != config.dim) {
    throw ConfigError("feature vector has " + std::to_string(x.size()) + " values, expected T=" +
                      std::to_string(config.dim));
  }
  const std::size_t len = config.part_dim();
  std::vector<std::span<const double>> parts;
  parts.reserve(config.parts);
  for (std::size_t p = 0; p < config.parts; ++p) parts.push_back(x.subspan(p * len, len));
  return parts;
}

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return metric == Metric::l2 ? std::sqrt(acc) : acc;
}

AnchorBank::AnchorBank(const TildaConfig& config) : config_(config) {
  config_.validate();
  const std::size_t slots =
      static_cast<std::size_t>(config_.classes) * config_.parts * config_.anchors_per_class;
  anchors_.assign(slots * config_.part_dim(), 0.0);
  counters_.assign(slots, 0);
}

AnchorBank::AnchorBank(const TildaConfig& config, std::vector<double> anchors,
                       std::vector<std::uint64_t> counters)
    : AnchorBank(config) {
  if (anchors.size() != anchors_.size() || counters.size() != counters_.size()) {
    throw FormatError("anchor bank storage does not match its configuration");
  }
  anchors_ = std::move(anchors);
  counters_ = std::move(counters);
}

std::span<const double> AnchorBank::anchor(std::uint32_t c, std::uint32_t p,
                                           std::uint32_t slot) const {
  const std::size_t len = config_.part_dim();
  return std::span<const double>(anchors_).subspan(index(c, p, slot) * len, len);
}

std::span<double> AnchorBank::anchor_mut(std::uint32_t c, std::uint32_t p, std::uint32_t slot) {
  const std::size_t len = config_.part_dim();
  return std::span<double>(anchors_).subspan(index(c, p, slot) * len, len);
}

bool AnchorBank::trained() const {
  // Every example touches every part, so part 0 of any class is enough.
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t s = 0; s < config_.anchors_per_class; ++s) {
      if (counter(c, 0, s) > 0) return true;
    }
  }
  return false;
}

std::uint32_t AnchorBank::select_anchor(std::span<const double> part, std::uint32_t c,
                                        std::uint32_t p) const {
  if (c >= config_.classes || p >= config_.parts) throw UsageError("class or part out of range");
  std::uint32_t best = 0;
  double best_score = std::numeric_limits<double>::infinity();
  for (std::uint32_t i = 0; i < config_.anchors_per_class; ++i) {
    const double score =
        distance(part, anchor(c, p, i), config_.metric) * static_cast<double>(counter(c, p, i));
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

void AnchorBank::learn_one(std::span<const double> x, std::uint32_t label,
                           std::span<std::uint32_t> chosen_slots) {
  if (label >= config_.classes) {
    throw UsageError("label " + std::to_string(label) + " out of range for C=" +
                     std::to_string(config_.classes));
  }
  if (!chosen_slots.empty() && chosen_slots.size() != config_.parts) {
    throw UsageError("chosen_slots must have one entry per part");
  }
  const auto parts = split(x, config_);
  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    const std::uint32_t slot = select_anchor(parts[p], label, p);
    auto y = anchor_mut(label, p, slot);
    auto& n = counters_[index(label, p, slot)];
    const double old_n = static_cast<double>(n);
    ++n;
    const double new_n = static_cast<double>(n);
    for (std::size_t j = 0; j < y.size(); ++j) y[j] = (y[j] * old_n + parts[p][j]) / new_n;
    if (!chosen_slots.empty()) chosen_slots[p] = slot;
  }
}

void AnchorBank::learn_one(const FeatureVector& x, TrainingLog* log) {
  if (!x.label) throw UsageError("cannot learn from an unlabelled feature vector");
  if (log == nullptr) {
    learn_one(x.values, *x.label);
    return;
  }
  std::vector<std::uint32_t> slots(config_.parts);
  learn_one(x.values, *x.label, slots);
  log->append(*x.label, slots, x.values);
}

std::uint32_t AnchorBank::classify_part(std::span<const double> part, std::uint32_t p) const {
  if (p >= config_.parts) throw UsageError("part out of range");
  if (part.size() != config_.part_dim()) throw ConfigError("subvector length mismatch");
  bool found = false;
  std::uint32_t best_class = 0;
  double best = 0.0;
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t s = 0; s < config_.anchors_per_class; ++s) {
      if (counter(c, p, s) == 0) continue;
      const double d = distance(part, anchor(c, p, s), config_.metric);
      if (!found || d < best) {
        found = true;
        best = d;
        best_class = c;
      }
    }
  }
  if (!found) throw UntrainedModelError("untrained model: part " + std::to_string(p) + " is empty");
  return best_class;
}

Prediction AnchorBank::predict(std::span<const double> x) const {
  if (!trained()) throw UntrainedModelError();
  const auto parts = split(x, config_);
  Prediction out;
  out.part_classes.resize(config_.parts);
  for (std::uint32_t p = 0; p < config_.parts; ++p) out.part_classes[p] = classify_part(parts[p], p);
  auto vote = parallel_vote(out.part_classes, config_.classes);
  out.part_tallies = std::move(vote.tallies);
  out.final_class = vote.winner;
  return out;
}

Prediction AnchorBank::predict_group(std::span<const FeatureVector> versions) const {
  if (versions.empty()) throw UsageError("empty augmentation group");
  for (const auto& v : versions) {
    if (v.group != versions.front().group) throw UsageError("group ids differ within one group");
  }
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

void AnchorBank::write(std::ostream& os) const {
  io::write_magic(os, "TLDB");
  io::write_u32(os, kBankFormatVersion);
  io::write_u32(os, config_.dim);
  io::write_u32(os, config_.parts);
  io::write_u32(os, config_.classes);
  io::write_u32(os, config_.anchors_per_class);
  for (double v : anchors_) io::write_f64(os, v);
  for (auto n : counters_) io::write_u64(os, n);
}

AnchorBank AnchorBank::read(std::istream& is) {
  io::expect_magic(is, "TLDB");
  const auto version = io::read_u32(is);
  if (version != kBankFormatVersion) {
    throw FormatError("unsupported anchor bank version " + std::to_string(version));
  }
  TildaConfig cfg;
  cfg.dim = io::read_u32(is);
  cfg.parts = io::read_u32(is);
  cfg.classes = io::read_u32(is);
  cfg.anchors_per_class = io::read_u32(is);
  try {
    cfg.validate();
  } catch (const ConfigError& e) {
    throw FormatError(std::string("anchor bank header: ") + e.what());
  }
  AnchorBank bank(cfg);
  for (auto& v : bank.anchors_) v = io::read_f64(is);
  for (auto& n : bank.counters_) n = io::read_u64(is);
  return bank;
}

void AnchorBank::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  write(os);
  if (!os) throw Error("write failed: " + path.string());
}

AnchorBank AnchorBank::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  return read(is);
}

}  // namespace tilda
