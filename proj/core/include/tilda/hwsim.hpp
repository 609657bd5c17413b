#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <span>
#include <vector>

#include "tilda/anchor_bank.hpp"
#include "tilda/config.hpp"
#include "tilda/fixedpoint.hpp"
#include "tilda/vote.hpp"

namespace tilda::hw {

// L-P signal: learn = 1, process (test) = 0.
enum class Mode : std::uint32_t { process = 0, learn = 1 };

struct CycleReport {
  std::uint64_t learn_cycles_per_vector = 0;
  std::uint64_t classify_cycles = 0;
  double frequency_hz = 0.0;
  double learn_latency_ns = 0.0;
  double classify_latency_ns = 0.0;
};

struct ResourceReport {
  std::uint64_t anchor_memory_bits = 0;
  std::uint64_t counter_memory_bits = 0;
  std::uint64_t total_memory_bits = 0;
  std::uint64_t dsp_count = 0;
};

// Learning takes k + 3 cycles per vector, classification C * k * R cycles
// per input. Throws UsageError for a non-positive frequency.
CycleReport timing_report(const TildaConfig& config, double frequency_hz);

// One DSP per feature dimension plus one per processing block; memories
// hold 18-bit words.
ResourceReport resource_report(const TildaConfig& config, const fx::StageFormats& formats = {});

// Counter/L-P: counts 0 .. modulo_in - 1. The class offset is added to the
// count in learn mode so only the rows of one class are visited.
struct AddressGenerator {
  std::uint32_t modulo_in = 1;
  std::uint32_t current = 0;
  std::uint32_t offset = 0;
  Mode lp = Mode::learn;

  std::uint32_t address() const { return offset + current; }
  void tick() { current = (current + 1) % modulo_in; }
};

struct ProcessingBlockState {
  // Row `c * k + slot` holds the anchor of (class c, slot) for this part.
  std::vector<std::int64_t> anchor_memory;
  std::vector<std::uint32_t> counter_memory;

  fx::Fixed distance_reg{};
  std::uint32_t best_index_reg = 0;
  std::int64_t best_value_reg = 0;
  bool best_valid = false;
  bool val_flag = false;
  bool write_read = true;  // 1 = read, 0 = memory write in progress

  // Update pipeline registers, one entry per subvector dimension.
  std::vector<std::int64_t> product_reg;
  std::vector<std::int64_t> sum_reg;
  bool frozen = false;

  std::uint32_t class_out = 0;
};

struct TraceRecord {
  std::uint64_t cycle = 0;
  std::uint32_t block = 0;
  std::uint32_t address = 0;
  std::int64_t distance_raw = 0;
  std::uint32_t best_index = 0;
  bool val = false;
};

struct ClassifyResult {
  std::uint32_t cls = 0;
  std::uint64_t cycles = 0;
  std::vector<std::uint32_t> version_classes;
  std::vector<std::uint32_t> version_tallies;
};

// Cycle-stepped model of the P processing blocks, the shared address
// generator, and the two majority-vote units. All arithmetic goes through
// tilda::fx at the configured stage formats.
//
// Learn transaction (k + 3 beats):
//   beats 0 .. k-1  distance to slot t computed and compared in the same
//                   beat; val rises on beat k-1
//   beat k          anchor * counter
//   beat k+1        + feature subvector, counter incremented
//   beat k+2        * reciprocal(counter), written back
// Process transaction (C * k beats per version): one address per beat,
// empty rows never win the comparison; val rises on the last address and
// the parallel and sequential votes latch in that same beat.
class SimMachine {
 public:
  // `lut` must outlive the machine.
  explicit SimMachine(const TildaConfig& config, const fx::StageFormats& formats = {},
                      const fx::ReciprocalLut& lut = fx::default_reciprocal_lut());

  const TildaConfig& config() const { return config_; }
  const fx::StageFormats& formats() const { return formats_; }
  Mode mode() const { return mode_; }
  // Throws ProtocolError while a transaction is in flight.
  void set_mode(Mode m);
  std::uint64_t cycle_count() const { return cycle_count_; }
  bool busy() const { return phase_ != Phase::idle; }
  bool trained() const;

  std::span<const ProcessingBlockState> blocks() const { return blocks_; }
  const AddressGenerator& address_generator() const { return addr_gen_; }
  const SequentialVote& sequential_vote_unit() const { return seq_vote_; }

  // Starts a learn transaction; x holds T raw values at feature_anchor.
  void begin_learn(std::span<const std::int64_t> x, std::uint32_t label);
  // Starts scanning one version in process mode.
  void begin_classify(std::span<const std::int64_t> x);
  // Advances one clock cycle. Throws ProtocolError when idle.
  void step();

  // sim_learn: runs a whole learn transaction, returns cycles consumed.
  std::uint64_t learn(std::span<const std::int64_t> x, std::uint32_t label);
  // sim_classify: R versions, parallel then sequential vote.
  ClassifyResult classify(std::span<const std::vector<std::int64_t>> versions);

  // Line-per-cycle trace, one line per block:
  //   cycle,block,address,distance_raw,best_index,val
  // Tracing stops after `max_cycles` traced cycles.
  void set_trace(std::ostream* os, std::uint64_t max_cycles = std::numeric_limits<std::uint64_t>::max());
  static const char* trace_header() { return "cycle,block,address,distance_raw,best_index,val"; }
  // Most recent record per block, for inspection in tests.
  std::span<const TraceRecord> last_records() const { return last_records_; }

  AnchorBank to_bank() const;
  // Loads anchors (which must be exactly representable at feature_anchor)
  // and counters from a bank with matching T, P, C, k.
  void load_bank(const AnchorBank& bank);

  // "TLSM" snapshot: magic, version u32, lp mode u32, cycle count u64, six
  // (n u32, m u32) stage formats in declaration order, then a "TLDB" bank.
  void save(const std::filesystem::path& path) const;
  static SimMachine load(const std::filesystem::path& path, std::uint32_t versions = 1,
                         const fx::ReciprocalLut& lut = fx::default_reciprocal_lut());

 private:
  enum class Phase { idle, scan, multiply, add, divide };

  void scan_beat();
  void multiply_beat();
  void add_beat();
  void divide_beat();
  void emit_trace();
  std::span<std::int64_t> row(ProcessingBlockState& b, std::uint32_t address);

  TildaConfig config_;
  fx::StageFormats formats_;
  const fx::ReciprocalLut* lut_;
  std::vector<ProcessingBlockState> blocks_;
  AddressGenerator addr_gen_;
  Mode mode_ = Mode::learn;
  Phase phase_ = Phase::idle;
  std::uint64_t cycle_count_ = 0;
  std::uint32_t beats_in_scan_ = 0;

  std::vector<std::int64_t> input_;
  std::uint32_t label_ = 0;
  SequentialVote seq_vote_;
  std::vector<std::uint32_t> part_classes_;

  std::ostream* trace_ = nullptr;
  std::uint64_t trace_budget_ = 0;
  std::vector<TraceRecord> last_records_;
};

}  // namespace tilda::hw
