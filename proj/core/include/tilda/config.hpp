#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace tilda {

enum class Metric { l2, l2sq };

std::string_view to_string(Metric m);
// Accepts "l2" and "l2sq"; throws ConfigError otherwise.
Metric parse_metric(std::string_view s);

// Hyperparameters of the classifier.
struct TildaConfig {
  std::uint32_t dim = 0;                // T, feature dimension
  std::uint32_t parts = 1;              // P, number of subspaces
  std::uint32_t classes = 1;            // C
  std::uint32_t anchors_per_class = 1;  // k, anchors per class per subspace
  std::uint32_t versions = 1;           // R, augmented versions per input
  Metric metric = Metric::l2sq;

  std::uint32_t part_dim() const { return dim / parts; }

  // Throws ConfigError unless every count is >= 1 and parts divides dim.
  void validate() const;

  friend bool operator==(const TildaConfig&, const TildaConfig&) = default;
};

// One labelled (or unlabelled) feature vector.
struct FeatureVector {
  std::vector<double> values;
  std::optional<std::uint32_t> label;
  std::uint32_t group = 0;
};

}  // namespace tilda
