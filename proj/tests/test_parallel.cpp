#include <gtest/gtest.h>

#include "golden.hpp"
#include "pvsa/dktype.hpp"

using namespace pvsa;

namespace {

void expect_same(const std::vector<SpecialReport>& a, const std::vector<SpecialReport>& b) {
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].members, b[i].members);
    EXPECT_EQ(a[i].special, b[i].special);
    EXPECT_EQ(a[i].stab, b[i].stab);
    EXPECT_EQ(a[i].env, b[i].env);
    EXPECT_EQ(a[i].minset, b[i].minset);
  }
}

}  // namespace

TEST(Parallel, EnumerationMatchesSerial) {
  for (const auto& inst : {golden::f4(), golden::e6(), golden::gl_chain({2, 3, 2})}) {
    auto serial = enumerate_spcl_serial(inst);
    EnumerateOptions two;
    two.jobs = 2;
    expect_same(serial, enumerate_spcl(inst, two));
    expect_same(serial, enumerate_spcl(inst));
  }
}

TEST(Parallel, StandardizationMatchesSerial) {
  RootDatum e6 = build_root_datum("E6");
  PvsInstance inst = golden::e6();
  auto labels = ifd_to_grading(e6, {"x", ParabolicIndex::of({1, 2, 3, 4}), {0, 0, 1, 0}});
  StandardizeOptions serial;
  serial.serial = true;
  StandardizeOptions four;
  four.jobs = 4;
  auto a = standardize_ifiltration(e6, inst, labels, serial);
  auto b = standardize_ifiltration(e6, inst, labels, four);
  EXPECT_EQ(a.w, b.w);
  EXPECT_EQ(a.u, b.u);
  EXPECT_EQ(a.candidates, b.candidates);
  EXPECT_EQ(a.passing, b.passing);
}
