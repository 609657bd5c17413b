#include <gtest/gtest.h>

#include <sstream>

#include "tilda/errors.hpp"
#include "tilda/settings.hpp"

using namespace tilda;

TEST(KeyValues, ParsesCommentsAndWhitespace) {
  std::istringstream in("# experiment\nT = 64   # dimension\n\n  P=8\nmetric = l2\n");
  const auto kv = parse_key_values(in);
  EXPECT_EQ(kv.size(), 3U);
  EXPECT_EQ(kv.at("T"), "64");
  EXPECT_EQ(kv.at("P"), "8");
  EXPECT_EQ(kv.at("metric"), "l2");
}

TEST(KeyValues, Errors) {
  std::istringstream no_eq("T 64\n");
  EXPECT_THROW(parse_key_values(no_eq), ConfigError);
  std::istringstream dup("T=1\nT=2\n");
  EXPECT_THROW(parse_key_values(dup), ConfigError);
  std::istringstream empty_key(" = 3\n");
  EXPECT_THROW(parse_key_values(empty_key), ConfigError);
  EXPECT_THROW(read_key_values("/nonexistent/tilda.cfg"), ConfigError);
}

TEST(RunConfig, AllKeys) {
  const auto rc = parse_run_config({{"T", "2048"}, {"P", "16"}, {"C", "10"}, {"k", "30"},
                                    {"R", "1"}, {"metric", "l2sq"}, {"quantize", "true"},
                                    {"frequency_mhz", "208"}, {"seed", "5"}, {"stream_seed", "6"}});
  EXPECT_EQ(rc.model.dim, 2048U);
  EXPECT_EQ(rc.model.parts, 16U);
  EXPECT_EQ(rc.model.classes, 10U);
  EXPECT_EQ(rc.model.anchors_per_class, 30U);
  EXPECT_EQ(rc.model.versions, 1U);
  EXPECT_EQ(rc.model.metric, Metric::l2sq);
  EXPECT_TRUE(rc.quantize);
  EXPECT_DOUBLE_EQ(rc.frequency_hz(), 208e6);
  EXPECT_EQ(rc.seed, 5U);
  EXPECT_EQ(rc.stream_seed, 6U);
}

TEST(RunConfig, Rejections) {
  EXPECT_THROW(parse_run_config({{"P", "2"}}), ConfigError);                       // no T
  EXPECT_THROW(parse_run_config({{"T", "10"}, {"P", "3"}}), ConfigError);          // P does not divide T
  EXPECT_THROW(parse_run_config({{"T", "2"}, {"P", "4"}}), ConfigError);           // T < P
  EXPECT_THROW(parse_run_config({{"T", "4"}, {"metric", "cosine"}}), ConfigError);
  EXPECT_THROW(parse_run_config({{"T", "4"}, {"quantize", "maybe"}}), ConfigError);
  EXPECT_THROW(parse_run_config({{"T", "4"}, {"frequency_mhz", "0"}}), ConfigError);
  EXPECT_THROW(parse_run_config({{"T", "4"}, {"colour", "red"}}), ConfigError);
  EXPECT_THROW(parse_run_config({{"T", "-4"}}), ConfigError);
}
