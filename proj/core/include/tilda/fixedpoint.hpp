#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace tilda::fx {

// Two's-complement fixed-point format: `total_bits` bits of storage, of which
// `int_bits` are integer bits (sign bit included). The remaining bits are
// fractional, so a raw integer r denotes r * 2^-(total_bits - int_bits).
struct QFormat {
  int total_bits = 18;
  int int_bits = 5;

  constexpr int frac_bits() const { return total_bits - int_bits; }
  constexpr bool valid() const {
    return int_bits >= 1 && int_bits <= total_bits && total_bits <= 64;
  }
  std::int64_t min_raw() const;
  std::int64_t max_raw() const;
  double resolution() const;
  double min_value() const;
  double max_value() const;

  // Throws ConfigError when the format is not valid().
  void validate() const;

  friend constexpr bool operator==(const QFormat&, const QFormat&) = default;
};

struct Fixed {
  std::int64_t raw = 0;
  QFormat fmt{};

  double value() const;
  friend constexpr bool operator==(const Fixed&, const Fixed&) = default;
};

// Per-stage formats of the 18-bit datapath.
struct StageFormats {
  QFormat feature_anchor{18, 5};
  QFormat distance{18, 10};
  QFormat address_counter{18, 18};
  QFormat distance_times_counter{18, 16};
  QFormat anchor_times_counter{18, 10};
  QFormat anchor_plus_feature{18, 10};

  friend constexpr bool operator==(const StageFormats&, const StageFormats&) = default;
};

// Largest counter value held by the 18-bit unsigned counter memory.
inline constexpr std::uint64_t kCounterMax = (std::uint64_t{1} << 18) - 1;

// All arithmetic below rounds half away from zero and saturates on overflow.
// When `saturated` is non-null it is set to whether clamping occurred.

// Throws NumericError for non-finite x.
Fixed quantize(double x, QFormat fmt, bool* saturated = nullptr);
double dequantize(Fixed a);

// Re-express `a` in `out`.
Fixed requantize(Fixed a, QFormat out, bool* saturated = nullptr);

Fixed add(Fixed a, Fixed b, QFormat out, bool* saturated = nullptr);
Fixed mul(Fixed a, Fixed b, QFormat out, bool* saturated = nullptr);

// Product of a fixed-point value with an unsigned integer (a counter).
Fixed mul_counter(Fixed a, std::uint64_t counter, QFormat out,
                  bool* saturated = nullptr);

// Squared Euclidean distance between two raw vectors sharing format `in`.
// Accumulation is exact; one rounding step lands the sum in `out`.
Fixed squared_distance(std::span<const std::int64_t> a,
                       std::span<const std::int64_t> b, QFormat in,
                       QFormat out, bool* saturated = nullptr);

// Table of quantized reciprocals 1/n for n in [1, depth]. Entries are
// unsigned: with the default (18,1) format the table holds 1.0 exactly at
// n = 1 and has 17 fractional bits.
class ReciprocalLut {
 public:
  static constexpr std::uint32_t kDefaultDepth = std::uint32_t{1} << 18;
  static constexpr QFormat kDefaultFormat{18, 1};

  explicit ReciprocalLut(std::uint32_t depth = kDefaultDepth,
                         QFormat fmt = kDefaultFormat);

  std::uint32_t depth() const { return static_cast<std::uint32_t>(entries_.size()); }
  QFormat format() const { return fmt_; }
  // Raw reciprocal for counter n; throws DivisionDomainError for n == 0 and
  // CapacityError for n > depth().
  std::int32_t entry(std::uint64_t n) const;
  std::span<const std::int32_t> entries() const { return entries_; }

  // Binary dump: "TLUT", depth u32, entries as little-endian i32.
  void save(const std::filesystem::path& path) const;
  static ReciprocalLut load(const std::filesystem::path& path,
                            QFormat fmt = kDefaultFormat);

  friend bool operator==(const ReciprocalLut&, const ReciprocalLut&) = default;

 private:
  ReciprocalLut(QFormat fmt, std::vector<std::int32_t> entries);

  QFormat fmt_;
  std::vector<std::int32_t> entries_;
};

// a / n realised as a * lut.entry(n), rescaled into `out`.
Fixed div_by_counter(Fixed a, std::uint64_t n, const ReciprocalLut& lut,
                     QFormat out, bool* saturated = nullptr);

// Process-wide default table (depth 2^18, format (18,1)), built on first use.
const ReciprocalLut& default_reciprocal_lut();

}  // namespace tilda::fx
