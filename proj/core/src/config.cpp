#include "tilda/config.hpp"

#include "tilda/errors.hpp"

namespace tilda {

std::string_view to_string(Metric m) { return m == Metric::l2 ? "l2" : "l2sq"; }

Metric parse_metric(std::string_view s) {
  if (s == "l2") return Metric::l2;
  if (s == "l2sq") return Metric::l2sq;
  throw ConfigError("unknown metric '" + std::string(s) + "' (expected l2 or l2sq)");
}

void TildaConfig::validate() const {
  if (dim == 0 || parts == 0 || classes == 0 || anchors_per_class == 0 || versions == 0) {
    throw ConfigError("T, P, C, k and R must all be >= 1");
  }
  if (dim % parts != 0) {
    throw ConfigError("P=" + std::to_string(parts) + " does not divide T=" + std::to_string(dim));
  }
}

}  // namespace tilda
