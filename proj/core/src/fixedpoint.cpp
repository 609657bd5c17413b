#include "tilda/fixedpoint.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <string>

#include "tilda/binary_io.hpp"
#include "tilda/errors.hpp"

namespace tilda::fx {

namespace {

using i128 = __int128;
using u128 = unsigned __int128;

// Divide by 2^shift, rounding half away from zero. shift >= 1.
i128 shift_round(i128 v, int shift) {
  const bool neg = v < 0;
  const u128 mag = neg ? -static_cast<u128>(v) : static_cast<u128>(v);
  u128 r = 0;
  if (shift < 128) {
    r = (mag >> shift) + ((mag >> (shift - 1)) & 1U);
  } else if (shift == 128) {
    r = mag >> 127;
  }
  return neg ? -static_cast<i128>(r) : static_cast<i128>(r);
}

Fixed clamp(i128 v, QFormat out, bool* saturated) {
  const i128 lo = out.min_raw();
  const i128 hi = out.max_raw();
  bool sat = false;
  if (v > hi) {
    v = hi;
    sat = true;
  } else if (v < lo) {
    v = lo;
    sat = true;
  }
  if (saturated != nullptr) *saturated = sat;
  return Fixed{static_cast<std::int64_t>(v), out};
}

// Land an exact value `v * 2^-from_frac` in `out` with one rounding step.
Fixed rescale(i128 v, int from_frac, QFormat out, bool* saturated) {
  const int shift = from_frac - out.frac_bits();
  if (shift > 0) return clamp(shift_round(v, shift), out, saturated);
  if (shift == 0 || v == 0) return clamp(v, out, saturated);

  const int ls = -shift;
  const i128 hi_sat = static_cast<i128>(out.max_raw()) + 1;
  if (ls >= 64 || v >= (i128{1} << (126 - ls)) || v <= -(i128{1} << (126 - ls))) {
    return clamp(v > 0 ? hi_sat : -hi_sat - 1, out, saturated);
  }
  return clamp(v * (i128{1} << ls), out, saturated);
}

}  // namespace

std::int64_t QFormat::min_raw() const {
  return total_bits == 64 ? std::numeric_limits<std::int64_t>::min()
                          : -(std::int64_t{1} << (total_bits - 1));
}

std::int64_t QFormat::max_raw() const {
  return total_bits == 64 ? std::numeric_limits<std::int64_t>::max()
                          : (std::int64_t{1} << (total_bits - 1)) - 1;
}

double QFormat::resolution() const { return std::ldexp(1.0, -frac_bits()); }
double QFormat::min_value() const { return std::ldexp(static_cast<double>(min_raw()), -frac_bits()); }
double QFormat::max_value() const { return std::ldexp(static_cast<double>(max_raw()), -frac_bits()); }

void QFormat::validate() const {
  if (!valid()) {
    throw ConfigError("invalid fixed-point format (" + std::to_string(total_bits) + "," +
                      std::to_string(int_bits) + "): need 1 <= m <= n <= 64");
  }
}

double Fixed::value() const { return dequantize(*this); }

Fixed quantize(double x, QFormat fmt, bool* saturated) {
  fmt.validate();
  if (!std::isfinite(x)) throw NumericError("cannot quantize a non-finite value");
  const double r = std::round(std::ldexp(x, fmt.frac_bits()));
  const double bound = std::ldexp(1.0, fmt.total_bits - 1);
  bool sat = false;
  std::int64_t raw = 0;
  if (r >= bound) {
    raw = fmt.max_raw();
    sat = true;
  } else if (r < -bound) {
    raw = fmt.min_raw();
    sat = true;
  } else {
    raw = static_cast<std::int64_t>(r);
  }
  if (saturated != nullptr) *saturated = sat;
  return Fixed{raw, fmt};
}

double dequantize(Fixed a) { return std::ldexp(static_cast<double>(a.raw), -a.fmt.frac_bits()); }

Fixed requantize(Fixed a, QFormat out, bool* saturated) {
  return rescale(a.raw, a.fmt.frac_bits(), out, saturated);
}

Fixed add(Fixed a, Fixed b, QFormat out, bool* saturated) {
  const int fa = a.fmt.frac_bits();
  const int fb = b.fmt.frac_bits();
  const int fc = std::max(fa, fb);
  const i128 sum = (static_cast<i128>(a.raw) << (fc - fa)) + (static_cast<i128>(b.raw) << (fc - fb));
  return rescale(sum, fc, out, saturated);
}

Fixed mul(Fixed a, Fixed b, QFormat out, bool* saturated) {
  const i128 prod = static_cast<i128>(a.raw) * static_cast<i128>(b.raw);
  return rescale(prod, a.fmt.frac_bits() + b.fmt.frac_bits(), out, saturated);
}

Fixed mul_counter(Fixed a, std::uint64_t counter, QFormat out, bool* saturated) {
  if (counter > (std::uint64_t{1} << 62)) throw UsageError("counter out of range for mul_counter");
  const i128 prod = static_cast<i128>(a.raw) * static_cast<i128>(counter);
  return rescale(prod, a.fmt.frac_bits(), out, saturated);
}

Fixed squared_distance(std::span<const std::int64_t> a, std::span<const std::int64_t> b,
                       QFormat in, QFormat out, bool* saturated) {
  if (a.size() != b.size()) throw UsageError("squared_distance: length mismatch");
  if (in.total_bits > 32) throw ConfigError("squared_distance: input format wider than 32 bits");
  i128 acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const i128 d = static_cast<i128>(a[i]) - b[i];
    acc += d * d;
  }
  return rescale(acc, 2 * in.frac_bits(), out, saturated);
}

ReciprocalLut::ReciprocalLut(std::uint32_t depth, QFormat fmt) : fmt_(fmt) {
  fmt_.validate();
  if (fmt_.total_bits > 31) throw ConfigError("reciprocal format must fit in 31 bits");
  if (depth == 0) throw ConfigError("reciprocal LUT depth must be positive");
  const int f = fmt_.frac_bits();
  const std::uint64_t one = std::uint64_t{1} << f;
  entries_.resize(depth);
  for (std::uint64_t n = 1; n <= depth; ++n) {
    entries_[n - 1] = static_cast<std::int32_t>((2 * one + n) / (2 * n));
  }
}

ReciprocalLut::ReciprocalLut(QFormat fmt, std::vector<std::int32_t> entries)
    : fmt_(fmt), entries_(std::move(entries)) {}

std::int32_t ReciprocalLut::entry(std::uint64_t n) const {
  if (n == 0) throw DivisionDomainError("division by a zero counter");
  if (n > entries_.size()) {
    throw CapacityError("counter " + std::to_string(n) + " exceeds reciprocal LUT depth " +
                        std::to_string(entries_.size()));
  }
  return entries_[n - 1];
}

void ReciprocalLut::save(const std::filesystem::path& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  io::write_magic(os, "TLUT");
  io::write_u32(os, depth());
  for (auto e : entries_) io::write_i32(os, e);
  if (!os) throw Error("write failed: " + path.string());
}

ReciprocalLut ReciprocalLut::load(const std::filesystem::path& path, QFormat fmt) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path.string());
  fmt.validate();
  io::expect_magic(is, "TLUT");
  const std::uint32_t depth = io::read_u32(is);
  if (depth == 0) throw FormatError("reciprocal LUT with zero depth");
  std::vector<std::int32_t> entries(depth);
  for (auto& e : entries) e = io::read_i32(is);
  return ReciprocalLut(fmt, std::move(entries));
}

Fixed div_by_counter(Fixed a, std::uint64_t n, const ReciprocalLut& lut, QFormat out,
                     bool* saturated) {
  const i128 prod = static_cast<i128>(a.raw) * lut.entry(n);
  return rescale(prod, a.fmt.frac_bits() + lut.format().frac_bits(), out, saturated);
}

const ReciprocalLut& default_reciprocal_lut() {
  static const ReciprocalLut lut;
  return lut;
}

}  // namespace tilda::fx
