#include "tilda/replay.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "tilda/binary_io.hpp"

namespace tilda {

namespace {
constexpr std::uint32_t kLogFormatVersion = 1;
}

void TrainingLog::append(std::uint32_t label, std::span<const std::uint32_t> slots,
                         std::span<const double> values) {
  if (slots.size() != parts_ || values.size() != dim_) {
    throw UsageError("training log entry shape does not match the log");
  }
  entries_.push_back(Entry{label, {slots.begin(), slots.end()}, {values.begin(), values.end()}});
}

void TrainingLog::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  io::write_magic(os, "TLLG");
  io::write_u32(os, kLogFormatVersion);
  io::write_u32(os, dim_);
  io::write_u32(os, parts_);
  io::write_u64(os, entries_.size());
  for (const auto& e : entries_) {
    io::write_u32(os, e.label);
    for (auto s : e.slots) io::write_u32(os, s);
    for (double v : e.values) io::write_f64(os, v);
  }
  if (!os) throw Error("write failed: " + path.string());
}

TrainingLog TrainingLog::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  io::expect_magic(is, "TLLG");
  if (io::read_u32(is) != kLogFormatVersion) throw FormatError("unsupported training log version");
  const auto dim = io::read_u32(is);
  const auto parts = io::read_u32(is);
  TrainingLog log(dim, parts);
  const auto count = io::read_u64(is);
  for (std::uint64_t i = 0; i < count; ++i) {
    Entry e;
    e.label = io::read_u32(is);
    e.slots.resize(parts);
    for (auto& s : e.slots) s = io::read_u32(is);
    e.values.resize(dim);
    for (auto& v : e.values) v = io::read_f64(is);
    log.entries_.push_back(std::move(e));
  }
  return log;
}

std::string ReplayReport::summary() const {
  std::ostringstream os;
  os << "entries=" << entries << " max_relative_error=" << max_relative_error
     << " counter_mismatches=" << counter_mismatches.size()
     << " anchor_mismatches=" << anchor_mismatches.size();
  for (const auto& m : counter_mismatches) {
    os << "\n  counter (c=" << m.cls << ",p=" << m.part << ",slot=" << m.slot
       << "): expected " << m.expected_count << " got " << m.actual_count;
  }
  for (const auto& m : anchor_mismatches) {
    os << "\n  anchor (c=" << m.cls << ",p=" << m.part << ",slot=" << m.slot << ")";
  }
  return os.str();
}

ReplayReport replay_verify(const AnchorBank& bank, const TrainingLog& log, double tolerance) {
  const auto& cfg = bank.config();
  if (log.dim() != cfg.dim || log.parts() != cfg.parts) {
    throw UsageError("training log shape does not match the anchor bank");
  }
  const std::size_t len = cfg.part_dim();
  const std::size_t k = cfg.anchors_per_class;
  const std::size_t slots = static_cast<std::size_t>(cfg.classes) * cfg.parts * k;
  std::vector<double> sums(slots * len, 0.0);
  std::vector<std::uint64_t> counts(slots, 0);

  for (const auto& e : log.entries()) {
    if (e.label >= cfg.classes) throw UsageError("training log label out of range");
    for (std::uint32_t p = 0; p < cfg.parts; ++p) {
      if (e.slots[p] >= k) throw UsageError("training log slot out of range");
      const std::size_t idx = (static_cast<std::size_t>(e.label) * cfg.parts + p) * k + e.slots[p];
      ++counts[idx];
      for (std::size_t j = 0; j < len; ++j) sums[idx * len + j] += e.values[p * len + j];
    }
  }

  ReplayReport report;
  report.entries = log.entries().size();
  for (std::uint32_t c = 0; c < cfg.classes; ++c) {
    for (std::uint32_t p = 0; p < cfg.parts; ++p) {
      for (std::uint32_t s = 0; s < k; ++s) {
        const std::size_t idx = (static_cast<std::size_t>(c) * cfg.parts + p) * k + s;
        const auto stored = bank.anchor(c, p, s);
        if (counts[idx] != bank.counter(c, p, s)) {
          report.counter_mismatches.push_back({c, p, s, counts[idx], bank.counter(c, p, s)});
        }
        double err2 = 0.0;
        double ref2 = 0.0;
        for (std::size_t j = 0; j < len; ++j) {
          const double mean = counts[idx] == 0 ? 0.0 : sums[idx * len + j] / static_cast<double>(counts[idx]);
          err2 += (stored[j] - mean) * (stored[j] - mean);
          ref2 += mean * mean;
        }
        double rel = 0.0;
        if (err2 > 0.0) rel = ref2 > 0.0 ? std::sqrt(err2 / ref2) : std::numeric_limits<double>::infinity();
        if (rel > report.max_relative_error) report.max_relative_error = rel;
        if (rel > tolerance) report.anchor_mismatches.push_back({c, p, s, counts[idx], bank.counter(c, p, s)});
      }
    }
  }
  return report;
}

}  // namespace tilda
