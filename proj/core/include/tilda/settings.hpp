#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "tilda/config.hpp"

namespace tilda {

// Flat `key = value` files. '#' starts a comment; blank lines are ignored.
// Throws ConfigError on malformed lines or duplicate keys.
std::map<std::string, std::string> parse_key_values(std::istream& is);
std::map<std::string, std::string> read_key_values(const std::filesystem::path& path);

// Experiment configuration file. Keys: T, P, C, k, R, metric, quantize,
// frequency_mhz, seed, stream_seed. Unknown keys are rejected.
struct RunConfig {
  TildaConfig model;
  bool quantize = false;
  double frequency_mhz = 208.0;
  std::uint64_t seed = 0;
  std::uint64_t stream_seed = 0;

  double frequency_hz() const { return frequency_mhz * 1e6; }
};

RunConfig parse_run_config(const std::map<std::string, std::string>& kv);
RunConfig load_run_config(const std::filesystem::path& path);

}  // namespace tilda
