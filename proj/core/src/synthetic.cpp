#include "tilda/synthetic.hpp"

#include <charconv>
#include <limits>
#include <random>

#include "tilda/errors.hpp"
#include "tilda/settings.hpp"

namespace tilda {

namespace {

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  T v{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("bad value for " + key + ": '" + value + "'");
  return v;
}

}  // namespace

void SyntheticSpec::validate() const {
  if (classes == 0 || dim == 0 || clusters_per_class == 0 || train_per_class == 0 ||
      test_per_class == 0 || versions == 0) {
    throw UsageError("synthetic spec counts must all be >= 1");
  }
  if (!(cluster_spread > 0.0) || !(center_scale > 0.0)) {
    throw UsageError("cluster_spread and center_scale must be positive");
  }
  if (!(jitter >= 0.0)) throw UsageError("jitter must be non-negative");
}

SyntheticSpec parse_synthetic_spec(const std::map<std::string, std::string>& kv) {
  SyntheticSpec s;
  for (const auto& [key, value] : kv) {
    if (key == "C") s.classes = to_number<std::uint32_t>(key, value);
    else if (key == "T") s.dim = to_number<std::uint32_t>(key, value);
    else if (key == "clusters_per_class") s.clusters_per_class = to_number<std::uint32_t>(key, value);
    else if (key == "cluster_spread") s.cluster_spread = to_number<double>(key, value);
    else if (key == "center_scale") s.center_scale = to_number<double>(key, value);
    else if (key == "train_per_class") s.train_per_class = to_number<std::uint32_t>(key, value);
    else if (key == "test_per_class") s.test_per_class = to_number<std::uint32_t>(key, value);
    else if (key == "R") s.versions = to_number<std::uint32_t>(key, value);
    else if (key == "jitter") s.jitter = to_number<double>(key, value);
    else if (key == "seed") s.seed = to_number<std::uint64_t>(key, value);
    else throw ConfigError("unknown synthetic spec key " + key);
  }
  s.validate();
  return s;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  return parse_synthetic_spec(read_key_values(path));
}

SyntheticData gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_int_distribution<std::uint32_t> pick(0, spec.clusters_per_class - 1);

  SyntheticData out;
  out.centers.resize(std::size_t{spec.classes} * spec.clusters_per_class);
  for (auto& c : out.centers) {
    c.resize(spec.dim);
    for (auto& v : c) v = spec.center_scale * normal(rng);
  }

  auto sample = [&](std::uint32_t cls) {
    const auto& center = out.centers[std::size_t{cls} * spec.clusters_per_class + pick(rng)];
    std::vector<float> x(spec.dim);
    for (std::size_t j = 0; j < spec.dim; ++j) {
      x[j] = static_cast<float>(center[j] + spec.cluster_spread * normal(rng));
    }
    return x;
  };

  out.train.dim = out.test.dim = spec.dim;
  out.train.classes = out.test.classes = spec.classes;

  std::uint32_t group = 0;
  for (std::uint32_t c = 0; c < spec.classes; ++c) {
    for (std::uint32_t i = 0; i < spec.train_per_class; ++i) {
      out.train.records.push_back(DatasetRecord{c, group++, sample(c)});
    }
  }

  const double jitter_sd = spec.jitter * spec.cluster_spread;
  group = 0;
  for (std::uint32_t c = 0; c < spec.classes; ++c) {
    for (std::uint32_t i = 0; i < spec.test_per_class; ++i) {
      const auto base = sample(c);
      out.test.records.push_back(DatasetRecord{c, group, base});
      for (std::uint32_t r = 1; r < spec.versions; ++r) {
        std::vector<float> x(spec.dim);
        for (std::size_t j = 0; j < spec.dim; ++j) {
          x[j] = static_cast<float>(base[j] + jitter_sd * normal(rng));
        }
        out.test.records.push_back(DatasetRecord{c, group, std::move(x)});
      }
      ++group;
    }
  }
  return out;
}

double nearest_centroid_accuracy(const SyntheticData& data) {
  const auto groups = data.test.groups();
  if (groups.empty()) return 0.0;
  const std::size_t per_class = data.centers.size() / data.test.classes;
  std::size_t correct = 0;
  for (const auto& g : groups) {
    const auto& x = g.front().values;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < data.centers.size(); ++i) {
      double d = 0.0;
      for (std::size_t j = 0; j < x.size(); ++j) {
        const double diff = x[j] - data.centers[i][j];
        d += diff * diff;
      }
      if (d < best) {
        best = d;
        best_idx = i;
      }
    }
    if (best_idx / per_class == g.front().label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(groups.size());
}

}  // namespace tilda
