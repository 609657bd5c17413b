#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tilda/config.hpp"
#include "tilda/dataset.hpp"
#include "tilda/hwsim.hpp"

namespace tilda {

enum class Variant { float_reference, quantized_reference, hwsim };

std::string_view to_string(Variant v);
// Accepts the long names above and the CLI short forms float, quant, sim.
Variant parse_variant(std::string_view s);
// Comma-separated list, e.g. "float,quant,sim".
std::vector<Variant> parse_variant_list(std::string_view s);

struct VariantResult {
  Variant variant = Variant::float_reference;
  double accuracy = 0.0;
  std::uint64_t correct = 0;
  std::uint64_t total = 0;
  // Row-major C x C, confusion[true * C + predicted].
  std::vector<std::uint64_t> confusion;
  // One prediction per test group, in file order.
  std::vector<std::uint32_t> predictions;
  // Cycles measured by the simulator (hwsim only).
  std::uint64_t learn_cycles = 0;
  std::uint64_t classify_cycles = 0;
};

struct ExperimentResult {
  std::uint32_t classes = 0;
  std::uint32_t versions = 1;
  std::vector<VariantResult> variants;
  hw::CycleReport timing;
  hw::ResourceReport resources;

  const VariantResult* find(Variant v) const;
};

// Permutation of [0, n) drawn from `seed`.
std::vector<std::size_t> stream_order(std::size_t n, std::uint64_t seed);

struct ExperimentOptions {
  double frequency_hz = 208e6;
  // Line-per-cycle simulator trace (hwsim only).
  std::ostream* trace = nullptr;
  std::uint64_t max_trace_cycles = ~std::uint64_t{0};
};

// Streams the training records once, in the order given by `stream_seed`,
// through each requested variant, then evaluates every test group. Groups
// are classified from their first R versions (sequential vote when R > 1).
// Throws ConfigError when a dataset header disagrees with the config or a
// test group has fewer than R versions.
ExperimentResult run_experiment(const TildaConfig& config, const Dataset& train,
                                const Dataset& test, std::span<const Variant> variants,
                                std::uint64_t stream_seed, const ExperimentOptions& options = {});

}  // namespace tilda
