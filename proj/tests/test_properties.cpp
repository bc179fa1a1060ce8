#include <gtest/gtest.h>

#include "properties.hpp"

namespace {

const std::vector<pvsa::PvsInstance>& pool() {
  static const auto p = props::small_dk_pool();
  return p;
}

constexpr std::uint64_t kSeed = 20240611;

}  // namespace

TEST(Properties, PoolIsLargeEnough) { EXPECT_GE(pool().size(), 15U); }

TEST(Properties, ClosureLaws) {
  auto t = props::closure_laws(pool(), kSeed);
  EXPECT_TRUE(t.passed()) << t.summary();
}

TEST(Properties, LambdaIdentity) {
  auto t = props::lambda_identity(pool());
  EXPECT_TRUE(t.passed()) << t.summary();
}

TEST(Properties, MinsetConsequences) {
  auto t = props::minset_consequences(pool(), kSeed);
  EXPECT_TRUE(t.cone.passed()) << t.cone.summary();
  EXPECT_TRUE(t.matching.passed()) << t.matching.summary();
}

TEST(Properties, EnvelopeAllIn) {
  auto t = props::envelope_allin(kSeed);
  EXPECT_TRUE(t.passed(200)) << t.summary();
}

TEST(Properties, RayReconstruction) {
  auto t = props::ray_reconstruction(kSeed);
  EXPECT_TRUE(t.passed()) << t.summary();
}

TEST(Properties, TorusScaling) {
  auto t = props::torus_scaling(kSeed);
  EXPECT_TRUE(t.passed()) << t.summary();
}

TEST(Properties, E6IntersectionsAndEnvelopes) {
  auto e6 = golden::e6();
  std::vector<pvsa::Mask> spcl;
  for (const auto& r : pvsa::enumerate_spcl(e6))
    if (r.special == pvsa::Tri::Yes) spcl.push_back(r.members);
  ASSERT_EQ(spcl.size(), 18U);
  auto inter = props::e6_intersections(e6, spcl);
  EXPECT_TRUE(inter.passed(1)) << inter.summary();
  auto adm = props::e6_admsets(e6, kSeed);
  EXPECT_TRUE(adm.passed()) << adm.summary();
}
