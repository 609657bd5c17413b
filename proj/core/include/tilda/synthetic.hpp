#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "tilda/dataset.hpp"

namespace tilda {

// Gaussian-mixture stand-in for extracted features. Each class owns
// `clusters_per_class` centers drawn from N(0, center_scale^2 I); samples
// are drawn around a uniformly chosen center of their class with standard
// deviation `cluster_spread`. Each test example is followed by R - 1 copies
// jittered by N(0, (jitter * cluster_spread)^2 I), all sharing a group id.
struct SyntheticSpec {
  std::uint32_t classes = 10;
  std::uint32_t dim = 64;
  std::uint32_t clusters_per_class = 3;
  double cluster_spread = 0.3;
  double center_scale = 1.0;
  std::uint32_t train_per_class = 100;
  std::uint32_t test_per_class = 50;
  std::uint32_t versions = 5;
  double jitter = 0.5;
  std::uint64_t seed = 1;

  // Throws UsageError for zero counts or non-positive spreads.
  void validate() const;
};

// Keys: C, T, clusters_per_class, cluster_spread, center_scale,
// train_per_class, test_per_class, R, jitter, seed.
SyntheticSpec parse_synthetic_spec(const std::map<std::string, std::string>& kv);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

struct SyntheticData {
  Dataset train;
  Dataset test;
  // Row c * clusters_per_class + j is the j-th center of class c.
  std::vector<std::vector<double>> centers;
};

SyntheticData gen_synthetic(const SyntheticSpec& spec);

// Accuracy of assigning each test group's first version to the class of the
// nearest true center: a ceiling for any classifier on this data.
double nearest_centroid_accuracy(const SyntheticData& data);

}  // namespace tilda
