#include "tilda/experiment.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <ranges>

#include "tilda/anchor_bank.hpp"
#include "tilda/errors.hpp"
#include "tilda/quantized.hpp"

namespace tilda {

std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::float_reference: return "float_reference";
    case Variant::quantized_reference: return "quantized_reference";
    case Variant::hwsim: return "hwsim";
  }
  return "?";
}

Variant parse_variant(std::string_view s) {
  if (s == "float" || s == "float_reference") return Variant::float_reference;
  if (s == "quant" || s == "quantized_reference") return Variant::quantized_reference;
  if (s == "sim" || s == "hwsim") return Variant::hwsim;
  throw UsageError("unknown variant '" + std::string(s) + "'");
}

std::vector<Variant> parse_variant_list(std::string_view s) {
  std::vector<Variant> out;
  while (!s.empty()) {
    const auto comma = s.find(',');
    const auto item = s.substr(0, comma);
    if (!item.empty()) {
      const auto v = parse_variant(item);
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

const VariantResult* ExperimentResult::find(Variant v) const {
  for (const auto& r : variants) {
    if (r.variant == v) return &r;
  }
  return nullptr;
}

std::vector<std::size_t> stream_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

namespace {

void check_header(const TildaConfig& config, const Dataset& d, const char* which) {
  if (d.dim != config.dim || d.classes != config.classes) {
    throw ConfigError(std::string(which) + " dataset header (T=" + std::to_string(d.dim) +
                      ", C=" + std::to_string(d.classes) + ") does not match config (T=" +
                      std::to_string(config.dim) + ", C=" + std::to_string(config.classes) + ")");
  }
}

// One test group truncated to its first R versions.
struct TestGroup {
  std::uint32_t label;
  std::vector<FeatureVector> versions;
};

std::vector<TestGroup> test_groups(const Dataset& test, std::uint32_t versions) {
  std::vector<TestGroup> out;
  for (const auto& g : test.groups()) {
    if (g.size() < versions) {
      throw ConfigError("test group " + std::to_string(g.front().group) + " has " +
                        std::to_string(g.size()) + " versions, config asks for R=" +
                        std::to_string(versions));
    }
    TestGroup tg{g.front().label, {}};
    for (std::size_t r = 0; r < versions; ++r) tg.versions.push_back(g[r].to_feature_vector());
    out.push_back(std::move(tg));
  }
  return out;
}

VariantResult evaluate(Variant variant, const TildaConfig& config, const Dataset& train,
                       std::span<const std::size_t> order, std::span<const TestGroup> groups,
                       const ExperimentOptions& options) {
  VariantResult res;
  res.variant = variant;
  res.predictions.reserve(groups.size());

  // Single pass over the training records; each is materialised on demand.
  auto stream = order | std::views::transform(
                            [&train](std::size_t i) { return train.records[i].to_feature_vector(); });

  switch (variant) {
    case Variant::float_reference: {
      AnchorBank bank(config);
      learn_stream(bank, stream);
      for (const auto& g : groups) res.predictions.push_back(bank.predict_group(g.versions).final_class);
      break;
    }
    case Variant::quantized_reference: {
      QuantizedBank bank(config);
      for (auto&& x : stream) bank.learn_one(x.values, *x.label);
      for (const auto& g : groups) res.predictions.push_back(bank.predict_group(g.versions).final_class);
      break;
    }
    case Variant::hwsim: {
      hw::SimMachine machine(config);
      machine.set_trace(options.trace, options.max_trace_cycles);
      const auto fmt = machine.formats().feature_anchor;
      for (auto&& x : stream) res.learn_cycles += machine.learn(quantize_vector(x.values, fmt), *x.label);
      machine.set_mode(hw::Mode::process);
      for (const auto& g : groups) {
        std::vector<std::vector<std::int64_t>> versions;
        for (const auto& v : g.versions) versions.push_back(quantize_vector(v.values, fmt));
        const auto r = machine.classify(versions);
        res.classify_cycles += r.cycles;
        res.predictions.push_back(r.cls);
      }
      break;
    }
  }

  res.confusion.assign(std::size_t{config.classes} * config.classes, 0);
  for (std::size_t i = 0; i < groups.size(); ++i) {
    ++res.confusion[std::size_t{groups[i].label} * config.classes + res.predictions[i]];
    if (res.predictions[i] == groups[i].label) ++res.correct;
  }
  res.total = groups.size();
  res.accuracy = res.total == 0 ? 0.0 : static_cast<double>(res.correct) / static_cast<double>(res.total);
  return res;
}

}  // namespace

ExperimentResult run_experiment(const TildaConfig& config, const Dataset& train,
                                const Dataset& test, std::span<const Variant> variants,
                                std::uint64_t stream_seed, const ExperimentOptions& options) {
  config.validate();
  check_header(config, train, "training");
  check_header(config, test, "test");

  ExperimentResult result;
  result.classes = config.classes;
  result.versions = config.versions;
  result.timing = hw::timing_report(config, options.frequency_hz);
  result.resources = hw::resource_report(config);

  const auto order = stream_order(train.records.size(), stream_seed);
  const auto groups = test_groups(test, config.versions);
  for (const auto v : variants) result.variants.push_back(evaluate(v, config, train, order, groups, options));
  return result;
}

}  // namespace tilda
