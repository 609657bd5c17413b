#pragma once

#include <string>
#include <string_view>

#include "tilda/experiment.hpp"

namespace tilda {

enum class ReportFormat { text, csv, json_lines };

ReportFormat parse_report_format(std::string_view s);

// CSV columns, one row per variant:
//   variant,accuracy,correct,total,learn_cycles_per_vector,classify_cycles,
//   frequency_mhz,learn_latency_ns,classify_latency_ns,dsp_count,
//   anchor_memory_bits,counter_memory_bits,total_memory_bits
// json-lines emits one object per variant with the same keys. Reals are
// printed with 6 significant digits.
std::string render_report(const ExperimentResult& result, ReportFormat format);

// Closed-form timing/resource summary used by `report-resources`.
std::string render_hardware(const hw::CycleReport& timing, const hw::ResourceReport& resources);

}  // namespace tilda
