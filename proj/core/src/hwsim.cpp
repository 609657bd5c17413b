#include "tilda/hwsim.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <string>

#include "tilda/binary_io.hpp"
#include "tilda/errors.hpp"

namespace tilda::hw {

namespace {

constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace

CycleReport timing_report(const TildaConfig& config, double frequency_hz) {
  config.validate();
  if (!(frequency_hz > 0.0) || !std::isfinite(frequency_hz)) {
    throw UsageError("clock frequency must be positive");
  }
  CycleReport r;
  r.learn_cycles_per_vector = std::uint64_t{config.anchors_per_class} + 3;
  r.classify_cycles = std::uint64_t{config.classes} * config.anchors_per_class * config.versions;
  r.frequency_hz = frequency_hz;
  r.learn_latency_ns = static_cast<double>(r.learn_cycles_per_vector) / frequency_hz * 1e9;
  r.classify_latency_ns = static_cast<double>(r.classify_cycles) / frequency_hz * 1e9;
  return r;
}

ResourceReport resource_report(const TildaConfig& config, const fx::StageFormats& formats) {
  config.validate();
  const std::uint64_t rows = std::uint64_t{config.classes} * config.anchors_per_class;
  ResourceReport r;
  r.anchor_memory_bits = std::uint64_t(formats.feature_anchor.total_bits) * rows * config.dim;
  r.counter_memory_bits = std::uint64_t(formats.address_counter.total_bits) * rows * config.parts;
  r.total_memory_bits = r.anchor_memory_bits + r.counter_memory_bits;
  r.dsp_count = std::uint64_t{config.dim} + config.parts;
  return r;
}

SimMachine::SimMachine(const TildaConfig& config, const fx::StageFormats& formats,
                       const fx::ReciprocalLut& lut)
    : config_(config), formats_(formats), lut_(&lut), seq_vote_(config.classes == 0 ? 1 : config.classes) {
  config_.validate();
  const std::size_t rows = std::size_t{config_.classes} * config_.anchors_per_class;
  const std::size_t len = config_.part_dim();
  blocks_.resize(config_.parts);
  for (auto& b : blocks_) {
    b.anchor_memory.assign(rows * len, 0);
    b.counter_memory.assign(rows, 0);
    b.product_reg.assign(len, 0);
    b.sum_reg.assign(len, 0);
    b.distance_reg = fx::Fixed{0, formats_.distance};
  }
  part_classes_.assign(config_.parts, 0);
  last_records_.resize(config_.parts);
  set_mode(Mode::learn);
}

void SimMachine::set_mode(Mode m) {
  if (busy()) throw ProtocolError("cannot switch L-P mode during a transaction");
  mode_ = m;
  addr_gen_.lp = m;
  addr_gen_.current = 0;
  addr_gen_.offset = 0;
  addr_gen_.modulo_in =
      m == Mode::learn ? config_.anchors_per_class : config_.classes * config_.anchors_per_class;
}

bool SimMachine::trained() const {
  for (const auto& b : blocks_) {
    bool any = false;
    for (auto n : b.counter_memory) any = any || n > 0;
    if (!any) return false;
  }
  return true;
}

std::span<std::int64_t> SimMachine::row(ProcessingBlockState& b, std::uint32_t address) {
  const std::size_t len = config_.part_dim();
  return std::span<std::int64_t>(b.anchor_memory).subspan(address * len, len);
}

void SimMachine::begin_learn(std::span<const std::int64_t> x, std::uint32_t label) {
  if (mode_ != Mode::learn) throw ProtocolError("learn transaction requires L-P = learn");
  if (busy()) throw ProtocolError("transaction already in flight");
  if (x.size() != config_.dim) throw ConfigError("feature vector length mismatch");
  if (label >= config_.classes) throw UsageError("label " + std::to_string(label) + " out of range");
  input_.assign(x.begin(), x.end());
  label_ = label;
  addr_gen_.current = 0;
  addr_gen_.offset = label * config_.anchors_per_class;
  for (auto& b : blocks_) {
    b.best_valid = false;
    b.best_index_reg = 0;
    b.val_flag = false;
    b.write_read = true;
    b.frozen = false;
  }
  beats_in_scan_ = 0;
  phase_ = Phase::scan;
}

void SimMachine::begin_classify(std::span<const std::int64_t> x) {
  if (mode_ != Mode::process) throw ProtocolError("classify transaction requires L-P = process");
  if (busy()) throw ProtocolError("transaction already in flight");
  if (x.size() != config_.dim) throw ConfigError("feature vector length mismatch");
  input_.assign(x.begin(), x.end());
  addr_gen_.current = 0;
  addr_gen_.offset = 0;
  for (auto& b : blocks_) {
    b.best_valid = false;
    b.best_index_reg = 0;
    b.val_flag = false;
    b.write_read = true;
  }
  beats_in_scan_ = 0;
  phase_ = Phase::scan;
}

void SimMachine::scan_beat() {
  const std::uint32_t address = addr_gen_.address();
  const bool last = beats_in_scan_ + 1 == addr_gen_.modulo_in;
  const std::size_t len = config_.part_dim();
  const std::span<const std::int64_t> x(input_);

  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    auto& b = blocks_[p];
    const auto xp = x.subspan(p * len, len);
    const std::uint32_t n = b.counter_memory[address];
    bool valid = true;
    if (mode_ == Mode::learn) {
      const auto d = fx::squared_distance(xp, row(b, address), formats_.feature_anchor, formats_.distance);
      b.distance_reg = fx::mul_counter(d, n, formats_.distance_times_counter);
    } else if (n == 0) {
      b.distance_reg = fx::Fixed{formats_.distance.max_raw(), formats_.distance};
      valid = false;
    } else {
      b.distance_reg = fx::squared_distance(xp, row(b, address), formats_.feature_anchor, formats_.distance);
    }
    if (valid && (!b.best_valid || b.distance_reg.raw < b.best_value_reg)) {
      b.best_valid = true;
      b.best_value_reg = b.distance_reg.raw;
      b.best_index_reg = address;
    }
    b.val_flag = last;
    if (last && mode_ == Mode::process) {
      if (!b.best_valid) throw UntrainedModelError("untrained model: part " + std::to_string(p) + " is empty");
      b.class_out = b.best_index_reg / config_.anchors_per_class;
      part_classes_[p] = b.class_out;
    }
  }

  addr_gen_.tick();
  ++beats_in_scan_;
  if (!last) return;
  if (mode_ == Mode::learn) {
    phase_ = Phase::multiply;
  } else {
    seq_vote_.push(parallel_vote(part_classes_, config_.classes).winner);
    phase_ = Phase::idle;
  }
}

void SimMachine::multiply_beat() {
  const std::size_t len = config_.part_dim();
  for (auto& b : blocks_) {
    b.val_flag = false;
    b.write_read = false;
    const std::uint32_t n = b.counter_memory[b.best_index_reg];
    b.frozen = n >= fx::kCounterMax;
    const auto y = row(b, b.best_index_reg);
    for (std::size_t j = 0; j < len; ++j) {
      b.product_reg[j] = fx::mul_counter(fx::Fixed{y[j], formats_.feature_anchor}, n,
                                         formats_.anchor_times_counter).raw;
    }
  }
  phase_ = Phase::add;
}

void SimMachine::add_beat() {
  const std::size_t len = config_.part_dim();
  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    auto& b = blocks_[p];
    for (std::size_t j = 0; j < len; ++j) {
      b.sum_reg[j] = fx::add(fx::Fixed{b.product_reg[j], formats_.anchor_times_counter},
                             fx::Fixed{input_[p * len + j], formats_.feature_anchor},
                             formats_.anchor_plus_feature).raw;
    }
    if (!b.frozen) ++b.counter_memory[b.best_index_reg];
  }
  phase_ = Phase::divide;
}

void SimMachine::divide_beat() {
  const std::size_t len = config_.part_dim();
  for (auto& b : blocks_) {
    if (!b.frozen) {
      const std::uint32_t n = b.counter_memory[b.best_index_reg];
      auto y = row(b, b.best_index_reg);
      for (std::size_t j = 0; j < len; ++j) {
        y[j] = fx::div_by_counter(fx::Fixed{b.sum_reg[j], formats_.anchor_plus_feature}, n, *lut_,
                                  formats_.feature_anchor).raw;
      }
    }
    b.write_read = true;
  }
  phase_ = Phase::idle;
}

void SimMachine::step() {
  if (phase_ == Phase::idle) throw ProtocolError("step on an idle machine");
  // Scan beats share the generated address; update beats drive each
  // block's own winning row.
  const bool scanning = phase_ == Phase::scan;
  const std::uint32_t scan_address = addr_gen_.address();
  switch (phase_) {
    case Phase::scan: scan_beat(); break;
    case Phase::multiply: multiply_beat(); break;
    case Phase::add: add_beat(); break;
    case Phase::divide: divide_beat(); break;
    case Phase::idle: break;
  }
  for (std::uint32_t p = 0; p < config_.parts; ++p) {
    const auto& b = blocks_[p];
    last_records_[p] = TraceRecord{cycle_count_, p, scanning ? scan_address : b.best_index_reg,
                                   b.distance_reg.raw, b.best_index_reg, b.val_flag};
  }
  emit_trace();
  ++cycle_count_;
}

void SimMachine::emit_trace() {
  if (trace_ == nullptr || trace_budget_ == 0) return;
  for (const auto& r : last_records_) {
    *trace_ << r.cycle << ',' << r.block << ',' << r.address << ',' << r.distance_raw << ','
            << r.best_index << ',' << (r.val ? 1 : 0) << '\n';
  }
  --trace_budget_;
}

void SimMachine::set_trace(std::ostream* os, std::uint64_t max_cycles) {
  trace_ = os;
  trace_budget_ = max_cycles;
}

std::uint64_t SimMachine::learn(std::span<const std::int64_t> x, std::uint32_t label) {
  const std::uint64_t start = cycle_count_;
  begin_learn(x, label);
  while (busy()) step();
  return cycle_count_ - start;
}

ClassifyResult SimMachine::classify(std::span<const std::vector<std::int64_t>> versions) {
  if (mode_ != Mode::process) throw ProtocolError("classify requires L-P = process");
  if (versions.empty()) throw UsageError("empty augmentation group");
  if (!trained()) throw UntrainedModelError();
  const std::uint64_t start = cycle_count_;
  seq_vote_.reset();
  ClassifyResult out;
  for (const auto& v : versions) {
    begin_classify(v);
    while (busy()) step();
    out.version_classes.push_back(parallel_vote(part_classes_, config_.classes).winner);
  }
  out.cls = seq_vote_.winner();
  out.version_tallies.assign(seq_vote_.tallies().begin(), seq_vote_.tallies().end());
  out.cycles = cycle_count_ - start;
  return out;
}

AnchorBank SimMachine::to_bank() const {
  const std::uint32_t k = config_.anchors_per_class;
  const std::size_t len = config_.part_dim();
  std::vector<double> anchors;
  std::vector<std::uint64_t> counters;
  anchors.reserve(std::size_t{config_.classes} * config_.parts * k * len);
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t p = 0; p < config_.parts; ++p) {
      const auto& b = blocks_[p];
      for (std::uint32_t s = 0; s < k; ++s) {
        const std::size_t addr = std::size_t{c} * k + s;
        for (std::size_t j = 0; j < len; ++j) {
          anchors.push_back(fx::dequantize(fx::Fixed{b.anchor_memory[addr * len + j], formats_.feature_anchor}));
        }
        counters.push_back(b.counter_memory[addr]);
      }
    }
  }
  return AnchorBank(config_, std::move(anchors), std::move(counters));
}

void SimMachine::load_bank(const AnchorBank& bank) {
  const auto& bc = bank.config();
  if (bc.dim != config_.dim || bc.parts != config_.parts || bc.classes != config_.classes ||
      bc.anchors_per_class != config_.anchors_per_class) {
    throw ConfigError("anchor bank shape does not match the machine");
  }
  const std::uint32_t k = config_.anchors_per_class;
  const std::size_t len = config_.part_dim();
  for (std::uint32_t c = 0; c < config_.classes; ++c) {
    for (std::uint32_t p = 0; p < config_.parts; ++p) {
      auto& b = blocks_[p];
      for (std::uint32_t s = 0; s < k; ++s) {
        const std::size_t addr = std::size_t{c} * k + s;
        const auto y = bank.anchor(c, p, s);
        for (std::size_t j = 0; j < len; ++j) {
          const auto q = fx::quantize(y[j], formats_.feature_anchor);
          if (fx::dequantize(q) != y[j]) throw FormatError("anchor value not representable at feature_anchor format");
          b.anchor_memory[addr * len + j] = q.raw;
        }
        if (bank.counter(c, p, s) > fx::kCounterMax) throw FormatError("counter exceeds 18-bit range");
        b.counter_memory[addr] = static_cast<std::uint32_t>(bank.counter(c, p, s));
      }
    }
  }
}

void SimMachine::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  io::write_magic(os, "TLSM");
  io::write_u32(os, kSnapshotVersion);
  io::write_u32(os, static_cast<std::uint32_t>(mode_));
  io::write_u64(os, cycle_count_);
  for (const auto& f : {formats_.feature_anchor, formats_.distance, formats_.address_counter,
                        formats_.distance_times_counter, formats_.anchor_times_counter,
                        formats_.anchor_plus_feature}) {
    io::write_u32(os, static_cast<std::uint32_t>(f.total_bits));
    io::write_u32(os, static_cast<std::uint32_t>(f.int_bits));
  }
  to_bank().write(os);
  if (!os) throw Error("write failed: " + path.string());
}

SimMachine SimMachine::load(const std::filesystem::path& path, std::uint32_t versions,
                            const fx::ReciprocalLut& lut) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  io::expect_magic(is, "TLSM");
  if (io::read_u32(is) != kSnapshotVersion) throw FormatError("unsupported machine snapshot version");
  const auto mode = io::read_u32(is);
  if (mode > 1) throw FormatError("bad L-P mode in snapshot");
  const auto cycles = io::read_u64(is);
  fx::StageFormats formats;
  for (fx::QFormat* f : {&formats.feature_anchor, &formats.distance, &formats.address_counter,
                         &formats.distance_times_counter, &formats.anchor_times_counter,
                         &formats.anchor_plus_feature}) {
    f->total_bits = static_cast<int>(io::read_u32(is));
    f->int_bits = static_cast<int>(io::read_u32(is));
    if (!f->valid()) throw FormatError("bad stage format in snapshot");
  }
  const auto bank = AnchorBank::read(is);
  TildaConfig cfg = bank.config();
  cfg.versions = versions;
  SimMachine m(cfg, formats, lut);
  m.load_bank(bank);
  m.set_mode(static_cast<Mode>(mode));
  m.cycle_count_ = cycles;
  return m;
}

}  // namespace tilda::hw
