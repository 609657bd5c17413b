#pragma once

#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <string_view>

#include "tilda/errors.hpp"

// Little-endian primitives shared by the on-disk formats.
namespace tilda::io {

template <typename U>
void put_le(std::ostream& os, U v) {
  static_assert(std::is_unsigned_v<U>);
  char buf[sizeof(U)];
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    buf[i] = static_cast<char>((v >> (8 * i)) & 0xFF);
  }
  os.write(buf, sizeof(U));
}

template <typename U>
U get_le(std::istream& is) {
  static_assert(std::is_unsigned_v<U>);
  unsigned char buf[sizeof(U)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(U))) {
    throw FormatError("unexpected end of file");
  }
  U v = 0;
  for (std::size_t i = 0; i < sizeof(U); ++i) {
    v |= static_cast<U>(buf[i]) << (8 * i);
  }
  return v;
}

inline void write_u32(std::ostream& os, std::uint32_t v) { put_le(os, v); }
inline void write_u64(std::ostream& os, std::uint64_t v) { put_le(os, v); }
inline void write_i32(std::ostream& os, std::int32_t v) {
  put_le(os, std::bit_cast<std::uint32_t>(v));
}
inline void write_f32(std::ostream& os, float v) {
  put_le(os, std::bit_cast<std::uint32_t>(v));
}
inline void write_f64(std::ostream& os, double v) {
  put_le(os, std::bit_cast<std::uint64_t>(v));
}

inline std::uint32_t read_u32(std::istream& is) { return get_le<std::uint32_t>(is); }
inline std::uint64_t read_u64(std::istream& is) { return get_le<std::uint64_t>(is); }
inline std::int32_t read_i32(std::istream& is) {
  return std::bit_cast<std::int32_t>(get_le<std::uint32_t>(is));
}
inline float read_f32(std::istream& is) {
  return std::bit_cast<float>(get_le<std::uint32_t>(is));
}
inline double read_f64(std::istream& is) {
  return std::bit_cast<double>(get_le<std::uint64_t>(is));
}

inline void write_magic(std::ostream& os, std::string_view magic) {
  os.write(magic.data(), static_cast<std::streamsize>(magic.size()));
}

inline void expect_magic(std::istream& is, std::string_view magic) {
  char buf[8] = {};
  if (magic.size() > sizeof(buf) ||
      !is.read(buf, static_cast<std::streamsize>(magic.size())) ||
      std::string_view(buf, magic.size()) != magic) {
    throw FormatError("bad magic, expected \"" + std::string(magic) + "\"");
  }
}

}  // namespace tilda::io
