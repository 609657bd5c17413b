#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "support/oracles.hpp"
#include "tilda/errors.hpp"
#include "tilda/fixedpoint.hpp"

namespace fx = tilda::fx;
using tilda::oracle::exact_add;
using tilda::oracle::exact_mul;
using tilda::oracle::exact_of;
using tilda::oracle::oracle_quantize;

namespace {

constexpr fx::QFormat kQ18_5{18, 5};
constexpr fx::QFormat kQ18_10{18, 10};

TEST(QFormat, RangeAndResolution) {
  EXPECT_EQ(kQ18_5.frac_bits(), 13);
  EXPECT_EQ(kQ18_5.max_raw(), 131071);
  EXPECT_EQ(kQ18_5.min_raw(), -131072);
  EXPECT_DOUBLE_EQ(kQ18_5.min_value(), -16.0);
  EXPECT_DOUBLE_EQ(kQ18_5.max_value(), 16.0 - std::ldexp(1.0, -13));
  EXPECT_DOUBLE_EQ(kQ18_5.resolution(), std::ldexp(1.0, -13));
  EXPECT_EQ((fx::QFormat{64, 64}).max_raw(), std::numeric_limits<std::int64_t>::max());

  EXPECT_THROW((fx::QFormat{18, 0}).validate(), tilda::ConfigError);
  EXPECT_THROW((fx::QFormat{18, 19}).validate(), tilda::ConfigError);
  EXPECT_THROW((fx::QFormat{65, 1}).validate(), tilda::ConfigError);
  EXPECT_NO_THROW((fx::QFormat{1, 1}).validate());
}

TEST(StageFormats, DatapathDefaults) {
  const fx::StageFormats s;
  for (const auto& f : {s.feature_anchor, s.distance, s.address_counter, s.distance_times_counter,
                        s.anchor_times_counter, s.anchor_plus_feature}) {
    EXPECT_EQ(f.total_bits, 18);
  }
  EXPECT_EQ(s.feature_anchor.int_bits, 5);
  EXPECT_EQ(s.distance.int_bits, 10);
  EXPECT_EQ(s.address_counter.int_bits, 18);
  EXPECT_EQ(s.distance_times_counter.int_bits, 16);
  EXPECT_EQ(s.anchor_times_counter.int_bits, 10);
  EXPECT_EQ(s.anchor_plus_feature.int_bits, 10);
}

TEST(Quantize, Examples) {
  EXPECT_EQ(fx::quantize(1.0, kQ18_5).raw, 8192);
  EXPECT_EQ(fx::quantize(1.0, kQ18_5).value(), 1.0);
  EXPECT_EQ(fx::quantize(0.0, kQ18_5).raw, 0);
  EXPECT_EQ(fx::quantize(0.0, fx::QFormat{7, 3}).raw, 0);

  bool sat = false;
  const auto big = fx::quantize(20.0, kQ18_5, &sat);
  EXPECT_TRUE(sat);
  EXPECT_EQ(big.raw, 131071);
  EXPECT_EQ(big.value(), 16.0 - std::ldexp(1.0, -13));
  EXPECT_EQ(fx::quantize(-20.0, kQ18_5).raw, -131072);
}

TEST(Quantize, RoundsHalfAwayFromZero) {
  const double lsb = std::ldexp(1.0, -13);
  EXPECT_EQ(fx::quantize(0.5 * lsb, kQ18_5).raw, 1);
  EXPECT_EQ(fx::quantize(-0.5 * lsb, kQ18_5).raw, -1);
  EXPECT_EQ(fx::quantize(2.5 * lsb, kQ18_5).raw, 3);
  EXPECT_EQ(fx::quantize(0.49 * lsb, kQ18_5).raw, 0);
}

TEST(Quantize, RejectsNonFinite) {
  EXPECT_THROW(fx::quantize(std::nan(""), kQ18_5), tilda::NumericError);
  EXPECT_THROW(fx::quantize(INFINITY, kQ18_5), tilda::NumericError);
}

TEST(Quantize, ExhaustiveInvariantsQ18_5) {
  const double lsb = kQ18_5.resolution();
  std::int64_t prev = std::numeric_limits<std::int64_t>::min();
  for (std::int64_t r = kQ18_5.min_raw(); r <= kQ18_5.max_raw(); ++r) {
    const double x = static_cast<double>(r) * lsb;
    const auto q = fx::quantize(x, kQ18_5);
    ASSERT_EQ(q.raw, r);
    ASSERT_LE(std::abs(fx::dequantize(q) - x), lsb / 2);
    ASSERT_GE(q.raw, prev);
    prev = q.raw;
    const auto mid = fx::quantize(x + lsb / 2, kQ18_5);
    ASSERT_GE(mid.raw, q.raw);
    if (r != kQ18_5.min_raw()) {
      ASSERT_EQ(fx::quantize(-x, kQ18_5).raw, -q.raw);
    }
  }
  EXPECT_EQ(fx::quantize(-kQ18_5.min_value(), kQ18_5).raw, kQ18_5.max_raw());
}

TEST(Add, Examples) {
  const auto one = fx::quantize(1.0, kQ18_5);
  EXPECT_EQ(fx::add(one, one, kQ18_5).value(), 2.0);

  const auto x = fx::quantize(3.140625, kQ18_5);
  const fx::Fixed zero{0, kQ18_10};
  EXPECT_EQ(fx::add(zero, x, kQ18_10), fx::requantize(x, kQ18_10));

  bool sat = false;
  const fx::Fixed max{kQ18_5.max_raw(), kQ18_5};
  const auto s = fx::add(max, max, kQ18_5, &sat);
  EXPECT_TRUE(sat);
  EXPECT_EQ(s.raw, kQ18_5.max_raw());
  EXPECT_FALSE(std::isnan(s.value()));
  fx::add(one, one, kQ18_5, &sat);
  EXPECT_FALSE(sat);
}

TEST(Mul, Examples) {
  const auto one = fx::quantize(1.0, kQ18_5);
  const auto b = fx::quantize(-7.3, kQ18_5);
  EXPECT_EQ(fx::mul(one, b, kQ18_10), fx::requantize(b, kQ18_10));
  EXPECT_EQ(fx::mul(fx::Fixed{0, kQ18_5}, b, kQ18_10).raw, 0);
  EXPECT_EQ(fx::mul(fx::quantize(1.5, kQ18_5), fx::quantize(2.5, kQ18_5), kQ18_10).value(), 3.75);
  bool sat = false;
  fx::mul(fx::quantize(15.0, kQ18_5), fx::quantize(15.0, kQ18_5), fx::QFormat{18, 6}, &sat);
  EXPECT_TRUE(sat);
}

TEST(MulCounter, ScalesByInteger) {
  const auto a = fx::quantize(1.25, kQ18_5);
  EXPECT_EQ(fx::mul_counter(a, 3, kQ18_10).value(), 3.75);
  EXPECT_EQ(fx::mul_counter(a, 0, kQ18_10).raw, 0);
  bool sat = false;
  const auto s = fx::mul_counter(a, 1000, kQ18_10, &sat);
  EXPECT_TRUE(sat);
  EXPECT_EQ(s.raw, kQ18_10.max_raw());
}

TEST(SquaredDistance, ExactAccumulationSingleRounding) {
  const std::vector<std::int64_t> a{fx::quantize(1.0, kQ18_5).raw, fx::quantize(-2.0, kQ18_5).raw};
  const std::vector<std::int64_t> b{fx::quantize(0.5, kQ18_5).raw, fx::quantize(1.0, kQ18_5).raw};
  EXPECT_EQ(fx::squared_distance(a, b, kQ18_5, kQ18_10).value(), 0.25 + 9.0);
  EXPECT_EQ(fx::squared_distance(a, a, kQ18_5, kQ18_10).raw, 0);
  const std::vector<std::int64_t> far{kQ18_5.max_raw(), kQ18_5.max_raw()};
  const std::vector<std::int64_t> near{kQ18_5.min_raw(), kQ18_5.min_raw()};
  bool sat = false;
  EXPECT_EQ(fx::squared_distance(far, near, kQ18_5, kQ18_10, &sat).raw, kQ18_10.max_raw());
  EXPECT_TRUE(sat);
}

TEST(ReciprocalLut, Entries) {
  const auto& lut = fx::default_reciprocal_lut();
  EXPECT_EQ(lut.depth(), 1U << 18);
  EXPECT_EQ(lut.entry(1), 131072);  // exactly 1.0 with 17 fractional bits
  EXPECT_EQ(lut.entry(2), 65536);
  EXPECT_EQ(lut.entry(3), 43691);  // 131072 / 3 = 43690.67
  EXPECT_EQ(lut.entry(1U << 18), 1);  // 0.5 rounds away from zero
  EXPECT_THROW(lut.entry(0), tilda::DivisionDomainError);
  EXPECT_THROW(lut.entry((1U << 18) + 1), tilda::CapacityError);
}

TEST(DivByCounter, Examples) {
  const auto& lut = fx::default_reciprocal_lut();
  const auto a = fx::quantize(-3.71875, kQ18_5);
  EXPECT_EQ(fx::div_by_counter(a, 1, lut, kQ18_5), a);

  const auto four = fx::quantize(4.0, kQ18_10);
  EXPECT_NEAR(fx::div_by_counter(four, 2, lut, kQ18_5).value(), 2.0, kQ18_5.resolution());

  const auto one = fx::quantize(1.0, kQ18_10);
  const double bound = kQ18_5.resolution() + std::ldexp(1.0, -17);
  EXPECT_NEAR(fx::div_by_counter(one, 3, lut, kQ18_5).value(), 1.0 / 3.0, bound);

  EXPECT_THROW(fx::div_by_counter(one, 0, lut, kQ18_5), tilda::DivisionDomainError);
  const fx::ReciprocalLut small(8);
  EXPECT_THROW(fx::div_by_counter(one, 9, small, kQ18_5), tilda::CapacityError);
}

TEST(ReciprocalLut, DumpLoadRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "tilda_lut_test.bin";
  const fx::ReciprocalLut lut(1000);
  lut.save(path);
  EXPECT_EQ(std::filesystem::file_size(path), 4U + 4U + 4U * 1000U);
  std::ifstream is(path, std::ios::binary);
  char head[12];
  is.read(head, 12);
  EXPECT_EQ(std::string(head, 4), "TLUT");
  EXPECT_EQ(static_cast<unsigned char>(head[4]), 1000 & 0xFF);
  EXPECT_EQ(static_cast<unsigned char>(head[5]), 1000 >> 8);
  // first entry 131072 = 0x00020000, little-endian
  EXPECT_EQ(static_cast<unsigned char>(head[10]), 0x02);
  EXPECT_EQ(fx::ReciprocalLut::load(path), lut);
  std::filesystem::remove(path);
}

// Randomised agreement with exact big-integer arithmetic; the acceptance
// suite runs the same comparison at 10^5 cases per operation.
TEST(Properties, AgreeWithBigIntegerOracle) {
  std::mt19937_64 rng(7);
  const fx::QFormat formats[] = {{18, 5}, {18, 10}, {18, 16}, {18, 1}, {32, 8}, {12, 12}, {64, 20}};
  std::uniform_int_distribution<int> pick(0, std::size(formats) - 1);
  int checked = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto fa = formats[pick(rng)];
    const auto fb = formats[pick(rng)];
    const auto fo = formats[pick(rng)];
    std::uniform_int_distribution<std::int64_t> ra(fa.min_raw(), fa.max_raw());
    std::uniform_int_distribution<std::int64_t> rb(fb.min_raw(), fb.max_raw());
    const fx::Fixed a{ra(rng), fa};
    const fx::Fixed b{rb(rng), fb};
    bool sat = false;
    const auto sum = fx::add(a, b, fo, &sat);
    if (const auto o = oracle_quantize(exact_add(exact_of(a), exact_of(b)), fo)) {
      ASSERT_FALSE(sat);
      ASSERT_EQ(sum.raw, *o);
      ++checked;
    } else {
      ASSERT_TRUE(sat);
    }
    const auto prod = fx::mul(a, b, fo, &sat);
    if (const auto o = oracle_quantize(exact_mul(exact_of(a), exact_of(b)), fo)) {
      ASSERT_FALSE(sat);
      ASSERT_EQ(prod.raw, *o);
      ++checked;
    } else {
      ASSERT_TRUE(sat);
    }
  }
  EXPECT_GT(checked, 2000);
}

}  // namespace
