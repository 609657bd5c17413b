#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "tilda/config.hpp"

namespace tilda {

struct DatasetRecord {
  std::uint32_t label = 0;
  std::uint32_t group = 0;
  std::vector<float> values;

  FeatureVector to_feature_vector() const;
  friend bool operator==(const DatasetRecord&, const DatasetRecord&) = default;
};

inline constexpr std::uint32_t kDatasetFormatVersion = 1;

// Binary layout ("TLDS"): magic, version u32, T u32, C u32, count u32, then
// per record: label u32, group u32, T little-endian float32 values.
//
// CSV layout: one record per line, `label,group,v0,...,v(T-1)`. Blank lines
// and lines starting with '#' are ignored.
struct Dataset {
  std::uint32_t dim = 0;
  std::uint32_t classes = 0;
  std::vector<DatasetRecord> records;

  // Throws FormatError unless every record has T values, labels are < C,
  // and each group is contiguous with a single label.
  void validate() const;

  // Contiguous runs of records sharing a group id.
  std::vector<std::span<const DatasetRecord>> groups() const;

  void write(std::ostream& os) const;
  static Dataset read(std::istream& is);
  // `classes == 0` infers C as max label + 1.
  static Dataset read_csv(std::istream& is, std::uint32_t classes = 0);
  void write_csv(std::ostream& os) const;

  void save(const std::filesystem::path& path) const;
  // Sniffs the "TLDS" magic; anything else is parsed as CSV.
  static Dataset load(const std::filesystem::path& path);

  friend bool operator==(const Dataset&, const Dataset&) = default;
};

}  // namespace tilda
