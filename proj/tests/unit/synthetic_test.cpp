#include <gtest/gtest.h>

#include <sstream>

#include "tilda/errors.hpp"
#include "tilda/settings.hpp"
#include "tilda/experiment.hpp"
#include "tilda/synthetic.hpp"

using namespace tilda;

namespace {

std::string bytes_of(const Dataset& d) {
  std::ostringstream os;
  d.write(os);
  return os.str();
}

}  // namespace

TEST(Synthetic, SameSeedSameBytes) {
  SyntheticSpec spec;
  spec.train_per_class = 20;
  spec.test_per_class = 10;
  const auto a = gen_synthetic(spec);
  const auto b = gen_synthetic(spec);
  EXPECT_EQ(bytes_of(a.train), bytes_of(b.train));
  EXPECT_EQ(bytes_of(a.test), bytes_of(b.test));
  spec.seed = 2;
  EXPECT_NE(bytes_of(gen_synthetic(spec).train), bytes_of(a.train));
}

TEST(Synthetic, Shape) {
  SyntheticSpec spec;
  spec.classes = 4;
  spec.dim = 12;
  spec.train_per_class = 7;
  spec.test_per_class = 5;
  spec.versions = 3;
  const auto d = gen_synthetic(spec);
  EXPECT_EQ(d.train.records.size(), 28U);
  EXPECT_EQ(d.test.records.size(), 4U * 5U * 3U);
  EXPECT_EQ(d.test.groups().size(), 20U);
  for (const auto& g : d.test.groups()) EXPECT_EQ(g.size(), 3U);
  EXPECT_EQ(d.centers.size(), 4U * spec.clusters_per_class);
  EXPECT_NO_THROW(d.train.validate());
  EXPECT_NO_THROW(d.test.validate());
}

TEST(Synthetic, RejectsImpossibleSpecs) {
  SyntheticSpec spec;
  spec.train_per_class = 0;
  EXPECT_THROW(gen_synthetic(spec), UsageError);
  spec = {};
  spec.cluster_spread = 0.0;
  EXPECT_THROW(gen_synthetic(spec), UsageError);
  spec = {};
  spec.classes = 0;
  EXPECT_THROW(gen_synthetic(spec), UsageError);
}

TEST(Synthetic, VanishingSpreadIsPerfectlySeparable) {
  SyntheticSpec spec;
  spec.cluster_spread = 1e-9;
  spec.clusters_per_class = 2;
  spec.train_per_class = 30;
  spec.test_per_class = 20;
  spec.versions = 1;
  const auto d = gen_synthetic(spec);
  EXPECT_EQ(nearest_centroid_accuracy(d), 1.0);
  TildaConfig cfg;
  cfg.dim = 64;
  cfg.parts = 8;
  cfg.classes = 10;
  cfg.anchors_per_class = 2;
  const std::vector<Variant> variants{Variant::float_reference, Variant::quantized_reference};
  const auto r = run_experiment(cfg, d.train, d.test, variants, 3);
  EXPECT_EQ(r.variants[0].accuracy, 1.0);
  EXPECT_EQ(r.variants[1].accuracy, 1.0);
}

TEST(Synthetic, DefaultDeskCeiling) {
  const auto d = gen_synthetic(SyntheticSpec{});
  const double ceiling = nearest_centroid_accuracy(d);
  EXPECT_GE(ceiling, 0.9);
  EXPECT_LE(ceiling, 1.0);
}

TEST(Synthetic, SpecFileParsing) {
  std::istringstream in("C = 3\nT=8\ncluster_spread = 0.5\nR = 2\nseed = 99\n");
  const auto spec = parse_synthetic_spec(tilda::parse_key_values(in));
  EXPECT_EQ(spec.classes, 3U);
  EXPECT_EQ(spec.dim, 8U);
  EXPECT_EQ(spec.cluster_spread, 0.5);
  EXPECT_EQ(spec.versions, 2U);
  EXPECT_EQ(spec.seed, 99U);
  EXPECT_THROW(parse_synthetic_spec({{"bogus", "1"}}), ConfigError);
  EXPECT_THROW(parse_synthetic_spec({{"C", "0"}}), UsageError);
}
