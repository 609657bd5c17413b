#include "tilda/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "tilda/binary_io.hpp"
#include "tilda/errors.hpp"

namespace tilda {

namespace {

template <typename T>
T parse_number(std::string_view field, std::size_t line_no) {
  while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
  while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) {
    field.remove_suffix(1);
  }
  T v{};
  const auto* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw FormatError("CSV line " + std::to_string(line_no) + ": bad number '" + std::string(field) + "'");
  }
  return v;
}

}  // namespace

FeatureVector DatasetRecord::to_feature_vector() const {
  return FeatureVector{std::vector<double>(values.begin(), values.end()), label, group};
}

void Dataset::validate() const {
  if (dim == 0 || classes == 0) throw FormatError("dataset needs T >= 1 and C >= 1");
  std::set<std::uint32_t> closed;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (r.values.size() != dim) throw FormatError("record " + std::to_string(i) + " has wrong length");
    if (r.label >= classes) throw FormatError("record " + std::to_string(i) + " label out of range");
    if (i > 0 && records[i - 1].group == r.group) {
      if (records[i - 1].label != r.label) {
        throw FormatError("group " + std::to_string(r.group) + " mixes labels");
      }
    } else if (!closed.insert(r.group).second) {
      throw FormatError("group " + std::to_string(r.group) + " is not contiguous");
    }
  }
}

std::vector<std::span<const DatasetRecord>> Dataset::groups() const {
  std::vector<std::span<const DatasetRecord>> out;
  const std::span<const DatasetRecord> all(records);
  std::size_t start = 0;
  for (std::size_t i = 1; i <= records.size(); ++i) {
    if (i == records.size() || records[i].group != records[start].group) {
      out.push_back(all.subspan(start, i - start));
      start = i;
    }
  }
  return out;
}

void Dataset::write(std::ostream& os) const {
  io::write_magic(os, "TLDS");
  io::write_u32(os, kDatasetFormatVersion);
  io::write_u32(os, dim);
  io::write_u32(os, classes);
  io::write_u32(os, static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    io::write_u32(os, r.label);
    io::write_u32(os, r.group);
    for (float v : r.values) io::write_f32(os, v);
  }
}

Dataset Dataset::read(std::istream& is) {
  io::expect_magic(is, "TLDS");
  const auto version = io::read_u32(is);
  if (version != kDatasetFormatVersion) throw FormatError("unsupported dataset version " + std::to_string(version));
  Dataset d;
  d.dim = io::read_u32(is);
  d.classes = io::read_u32(is);
  const auto count = io::read_u32(is);
  d.records.resize(count);
  for (auto& r : d.records) {
    r.label = io::read_u32(is);
    r.group = io::read_u32(is);
    r.values.resize(d.dim);
    for (auto& v : r.values) v = io::read_f32(is);
  }
  d.validate();
  return d;
}

Dataset Dataset::read_csv(std::istream& is, std::uint32_t classes) {
  Dataset d;
  std::string line;
  std::size_t line_no = 0;
  std::uint32_t max_label = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line == "\r" || line.front() == '#') continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() < 3) throw FormatError("CSV line " + std::to_string(line_no) + ": need label,group,values");
    DatasetRecord r;
    r.label = parse_number<std::uint32_t>(fields[0], line_no);
    r.group = parse_number<std::uint32_t>(fields[1], line_no);
    for (std::size_t i = 2; i < fields.size(); ++i) r.values.push_back(parse_number<float>(fields[i], line_no));
    if (d.records.empty()) d.dim = static_cast<std::uint32_t>(r.values.size());
    max_label = std::max(max_label, r.label);
    d.records.push_back(std::move(r));
  }
  d.classes = classes != 0 ? classes : max_label + 1;
  if (d.records.empty()) throw FormatError("CSV dataset has no records");
  d.validate();
  return d;
}

void Dataset::write_csv(std::ostream& os) const {
  char buf[32];
  for (const auto& r : records) {
    os << r.label << ',' << r.group;
    for (float v : r.values) {
      auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
      os << ',' << std::string_view(buf, static_cast<std::size_t>(ptr - buf));
    }
    os << '\n';
  }
}

void Dataset::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  if (path.extension() == ".csv") {
    write_csv(os);
  } else {
    write(os);
  }
  if (!os) throw Error("write failed: " + path.string());
}

Dataset Dataset::load(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  char magic[4] = {};
  is.read(magic, 4);
  const bool binary = is.gcount() == 4 && std::string_view(magic, 4) == "TLDS";
  is.clear();
  is.seekg(0);
  return binary ? read(is) : read_csv(is);
}

}  // namespace tilda
