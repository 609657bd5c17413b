#include "tilda/settings.hpp"

#include <charconv>
#include <fstream>
#include <limits>
#include <string_view>

#include "tilda/errors.hpp"

namespace tilda {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T to_number(const std::string& key, const std::string& value) {
  T v{};
  const auto* end = value.data() + value.size();
  auto [ptr, ec] = std::from_chars(value.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw ConfigError("bad value for " + key + ": '" + value + "'");
  return v;
}

std::uint32_t to_u32(const std::string& key, const std::string& value) {
  const auto v = to_number<std::uint64_t>(key, value);
  if (v > std::numeric_limits<std::uint32_t>::max()) throw ConfigError(key + " out of range");
  return static_cast<std::uint32_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("bad boolean for " + key + ": '" + value + "'");
}

}  // namespace

std::map<std::string, std::string> parse_key_values(std::istream& is) {
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    std::string_view s(line);
    if (const auto hash = s.find('#'); hash != std::string_view::npos) s = s.substr(0, hash);
    s = trim(s);
    if (s.empty()) continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key(trim(s.substr(0, eq)));
    std::string value(trim(s.substr(eq + 1)));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    if (!kv.emplace(key, value).second) throw ConfigError("duplicate key " + key);
  }
  return kv;
}

std::map<std::string, std::string> read_key_values(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file " + path.string());
  return parse_key_values(is);
}

RunConfig parse_run_config(const std::map<std::string, std::string>& kv) {
  RunConfig rc;
  bool has_t = false;
  for (const auto& [key, value] : kv) {
    if (key == "T") {
      rc.model.dim = to_u32(key, value);
      has_t = true;
    } else if (key == "P") {
      rc.model.parts = to_u32(key, value);
    } else if (key == "C") {
      rc.model.classes = to_u32(key, value);
    } else if (key == "k") {
      rc.model.anchors_per_class = to_u32(key, value);
    } else if (key == "R") {
      rc.model.versions = to_u32(key, value);
    } else if (key == "metric") {
      rc.model.metric = parse_metric(value);
    } else if (key == "quantize") {
      rc.quantize = to_bool(key, value);
    } else if (key == "frequency_mhz") {
      rc.frequency_mhz = to_number<double>(key, value);
    } else if (key == "seed") {
      rc.seed = to_number<std::uint64_t>(key, value);
    } else if (key == "stream_seed") {
      rc.stream_seed = to_number<std::uint64_t>(key, value);
    } else {
      throw ConfigError("unknown config key " + key);
    }
  }
  if (!has_t) throw ConfigError("config is missing T");
  rc.model.validate();
  if (!(rc.frequency_mhz > 0.0)) throw ConfigError("frequency_mhz must be positive");
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_key_values(path));
}

}  // namespace tilda
