#include "tilda/report.hpp"

#include <cstdio>
#include <sstream>

#include "tilda/errors.hpp"

namespace tilda {

namespace {

std::string g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

constexpr const char* kColumns[] = {
    "variant",          "accuracy",           "correct",           "total",
    "learn_cycles_per_vector", "classify_cycles", "frequency_mhz", "learn_latency_ns",
    "classify_latency_ns", "dsp_count",       "anchor_memory_bits", "counter_memory_bits",
    "total_memory_bits"};

std::vector<std::string> row(const ExperimentResult& r, const VariantResult& v) {
  return {std::string(to_string(v.variant)),
          g6(v.accuracy),
          std::to_string(v.correct),
          std::to_string(v.total),
          std::to_string(r.timing.learn_cycles_per_vector),
          std::to_string(r.timing.classify_cycles),
          g6(r.timing.frequency_hz / 1e6),
          g6(r.timing.learn_latency_ns),
          g6(r.timing.classify_latency_ns),
          std::to_string(r.resources.dsp_count),
          std::to_string(r.resources.anchor_memory_bits),
          std::to_string(r.resources.counter_memory_bits),
          std::to_string(r.resources.total_memory_bits)};
}

}  // namespace

ReportFormat parse_report_format(std::string_view s) {
  if (s == "text") return ReportFormat::text;
  if (s == "csv") return ReportFormat::csv;
  if (s == "json-lines" || s == "jsonl") return ReportFormat::json_lines;
  throw UsageError("unknown report format '" + std::string(s) + "'");
}

std::string render_hardware(const hw::CycleReport& t, const hw::ResourceReport& res) {
  std::ostringstream os;
  os << "frequency_mhz            " << g6(t.frequency_hz / 1e6) << '\n'
     << "learn_cycles_per_vector  " << t.learn_cycles_per_vector << '\n'
     << "learn_latency_ns         " << g6(t.learn_latency_ns) << '\n'
     << "classify_cycles          " << t.classify_cycles << '\n'
     << "classify_latency_ns      " << g6(t.classify_latency_ns) << '\n'
     << "dsp_count                " << res.dsp_count << '\n'
     << "anchor_memory_bits       " << res.anchor_memory_bits << '\n'
     << "counter_memory_bits      " << res.counter_memory_bits << '\n'
     << "total_memory_bits        " << res.total_memory_bits << '\n';
  return os.str();
}

std::string render_report(const ExperimentResult& result, ReportFormat format) {
  std::ostringstream os;
  switch (format) {
    case ReportFormat::csv: {
      for (std::size_t i = 0; i < std::size(kColumns); ++i) os << (i ? "," : "") << kColumns[i];
      os << '\n';
      for (const auto& v : result.variants) {
        const auto cells = row(result, v);
        for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
        os << '\n';
      }
      break;
    }
    case ReportFormat::json_lines: {
      for (const auto& v : result.variants) {
        const auto cells = row(result, v);
        os << '{';
        for (std::size_t i = 0; i < cells.size(); ++i) {
          os << (i ? "," : "") << '"' << kColumns[i] << "\":";
          if (i == 0) {
            os << '"' << cells[i] << '"';
          } else {
            os << cells[i];
          }
        }
        os << "}\n";
      }
      break;
    }
    case ReportFormat::text: {
      os << "classes " << result.classes << ", versions per input R=" << result.versions << '\n';
      for (const auto& v : result.variants) {
        os << to_string(v.variant) << ": accuracy " << g6(v.accuracy) << " (" << v.correct << '/'
           << v.total << ')';
        if (v.variant == Variant::hwsim) {
          os << ", simulated cycles learn=" << v.learn_cycles << " classify=" << v.classify_cycles;
        }
        os << '\n';
        os << "  confusion (rows = true class):\n";
        for (std::uint32_t t = 0; t < result.classes; ++t) {
          os << "   ";
          for (std::uint32_t p = 0; p < result.classes; ++p) {
            os << ' ' << v.confusion[std::size_t{t} * result.classes + p];
          }
          os << '\n';
        }
      }
      os << render_hardware(result.timing, result.resources);
      break;
    }
  }
  return os.str();
}

}  // namespace tilda
