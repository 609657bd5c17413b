#include <gtest/gtest.h>

#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "tilda/dataset.hpp"
#include "tilda/errors.hpp"

using namespace tilda;

namespace {

Dataset small_dataset() {
  Dataset d;
  d.dim = 2;
  d.classes = 3;
  d.records = {{0, 0, {1.0f, -0.5f}}, {2, 1, {0.25f, 3.0f}}, {2, 1, {0.5f, 2.5f}}};
  return d;
}

std::filesystem::path tmp(const char* name) { return std::filesystem::temp_directory_path() / name; }

}  // namespace

TEST(Dataset, GoldenBinaryLayout) {
  std::ostringstream os;
  small_dataset().write(os);
  const std::string b = os.str();
  ASSERT_EQ(b.size(), 20U + 3U * (8U + 8U));
  EXPECT_EQ(b.substr(0, 4), "TLDS");
  const unsigned char header[] = {1, 0, 0, 0, 2, 0, 0, 0, 3, 0, 0, 0, 3, 0, 0, 0};
  EXPECT_EQ(std::memcmp(b.data() + 4, header, sizeof(header)), 0);
  // second record: label 2, group 1, 0.25f = 0x3E800000
  const unsigned char rec[] = {2, 0, 0, 0, 1, 0, 0, 0, 0x00, 0x00, 0x80, 0x3E};
  EXPECT_EQ(std::memcmp(b.data() + 20 + 16, rec, sizeof(rec)), 0);
}

TEST(Dataset, BinaryWriteReadIsByteIdentical) {
  std::mt19937 rng(3);
  std::normal_distribution<float> nd;
  Dataset d;
  d.dim = 5;
  d.classes = 4;
  for (std::uint32_t g = 0; g < 40; ++g) {
    const std::uint32_t label = g % 4;
    for (int r = 0; r < 3; ++r) {
      DatasetRecord rec{label, g, {}};
      for (int j = 0; j < 5; ++j) rec.values.push_back(nd(rng));
      d.records.push_back(rec);
    }
  }
  std::ostringstream first;
  d.write(first);
  std::istringstream in(first.str());
  const auto back = Dataset::read(in);
  EXPECT_EQ(back, d);
  std::ostringstream second;
  back.write(second);
  EXPECT_EQ(first.str(), second.str());
}

TEST(Dataset, CsvIngestion) {
  std::istringstream in(
      "# label,group,values\n"
      "0,0,1.0,-0.5\n"
      "\n"
      "2,1,0.25,3\n"
      "2,1, 0.5 ,2.5\r\n");
  const auto d = Dataset::read_csv(in);
  EXPECT_EQ(d, small_dataset());

  std::ostringstream out;
  d.write_csv(out);
  std::istringstream again(out.str());
  EXPECT_EQ(Dataset::read_csv(again, 3), d);
}

TEST(Dataset, LoadSniffsFormat) {
  const auto bin = tmp("tilda_ds_test.tlds");
  const auto csv = tmp("tilda_ds_test.csv");
  small_dataset().save(bin);
  small_dataset().save(csv);
  EXPECT_EQ(Dataset::load(bin), small_dataset());
  EXPECT_EQ(Dataset::load(csv), small_dataset());
  std::filesystem::remove(bin);
  std::filesystem::remove(csv);
}

TEST(Dataset, Groups) {
  const auto groups = small_dataset().groups();
  ASSERT_EQ(groups.size(), 2U);
  EXPECT_EQ(groups[0].size(), 1U);
  EXPECT_EQ(groups[1].size(), 2U);
  EXPECT_TRUE(Dataset{}.groups().empty());
}

TEST(Dataset, ValidationErrors) {
  auto d = small_dataset();
  d.records[1].values.pop_back();
  EXPECT_THROW(d.validate(), FormatError);

  d = small_dataset();
  d.records[0].label = 3;
  EXPECT_THROW(d.validate(), FormatError);

  d = small_dataset();
  d.records[2].label = 1;  // group 1 mixes labels
  EXPECT_THROW(d.validate(), FormatError);

  d = small_dataset();
  d.records.push_back({0, 0, {0.0f, 0.0f}});  // group 0 reappears
  EXPECT_THROW(d.validate(), FormatError);

  std::istringstream bad_csv("0,0,1.0,abc\n");
  EXPECT_THROW(Dataset::read_csv(bad_csv), FormatError);
  std::istringstream short_csv("0,0\n");
  EXPECT_THROW(Dataset::read_csv(short_csv), FormatError);

  std::ostringstream os;
  small_dataset().write(os);
  std::istringstream truncated(os.str().substr(0, 30));
  EXPECT_THROW(Dataset::read(truncated), FormatError);
}
