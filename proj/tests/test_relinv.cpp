#include <gtest/gtest.h>

#include <random>

#include "oracle/brute.hpp"
#include "pvsa/random.hpp"
#include "pvsa/relinv.hpp"

using namespace pvsa;

namespace {

QMat random_mat(std::mt19937_64& g, std::size_t n, bool skew) {
  QMat m(n, QVec(n, Q(0)));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (skew && j <= i) continue;
      m[i][j] = draw_uniform(g, -3, 3);
      if (skew) m[j][i] = -m[i][j];
    }
  return m;
}

}  // namespace

TEST(Relinv, DeterminantMatchesLeibniz) {
  std::mt19937_64 g(21);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 1 + static_cast<std::size_t>(t % 5);
    QMat m = random_mat(g, n, false);
    EXPECT_EQ(determinant(m), oracle::leibniz_det(m));
  }
}

TEST(Relinv, PfaffianMatchesMatchingsAndSquaresToDet) {
  std::mt19937_64 g(22);
  for (int t = 0; t < 100; ++t) {
    std::size_t n = 2 * (1 + static_cast<std::size_t>(t % 3));
    QMat m = random_mat(g, n, true);
    Q pf = pfaffian(m);
    EXPECT_EQ(pf, oracle::matching_pfaffian(m));
    EXPECT_EQ(pf * pf, oracle::leibniz_det(m));
  }
  EXPECT_EQ(pfaffian(default_form(OracleKind::SpChain, 4)), 1);
}

TEST(Relinv, CubicDiscriminantMatchesResultant) {
  std::mt19937_64 g(23);
  for (int t = 0; t < 100; ++t) {
    Q a = draw_uniform(g, 1, 5) * (draw_uniform(g, 0, 1) ? 1 : -1);
    Q b = draw_uniform(g, -5, 5), c = draw_uniform(g, -5, 5), d = draw_uniform(g, -5, 5);
    EXPECT_EQ(cubic_discriminant(a, b, c, d), oracle::resultant_discriminant(a, b, c, d));
  }
  // x^2 y has a repeated root.
  EXPECT_EQ(cubic_discriminant(0, 1, 0, 0), 0);
}

TEST(Relinv, BinaryCubicPencil) {
  OracleSpec spec;
  spec.kind = OracleKind::BinaryCubicMat3;
  spec.slot_count = 18;
  for (int m = 0; m < 2; ++m)
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) spec.layout.push_back({m, r, c});
  validate_oracle(spec);
  QVec point(18, Q(0));
  // A0 = diag(1,2,3), A1 = I: det = (s+t)(2s+t)(3s+t) = 6s^3 + 11s^2t + 6st^2 + t^3.
  for (int i = 0; i < 3; ++i) {
    point[static_cast<std::size_t>(i * 4)] = i + 1;
    point[static_cast<std::size_t>(9 + i * 4)] = 1;
  }
  auto v = evaluate_frips(spec, point);
  ASSERT_EQ(v.size(), 1U);
  EXPECT_EQ(v[0], cubic_discriminant(6, 11, 6, 1));
  EXPECT_NE(v[0], 0);
}

TEST(Relinv, GlChainValues) {
  // Shape (1,2,1): x1 is 1x2, x2 is 2x1, one FRIP x1 x2.
  OracleSpec spec;
  spec.kind = OracleKind::GlChain;
  spec.shape = {1, 2, 1};
  spec.slot_count = 4;
  spec.layout = {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 1, 0}};
  validate_oracle(spec);
  EXPECT_EQ(frip_count(spec), 1U);
  auto v = evaluate_frips(spec, from_ints({2, 3, 5, 7}));
  EXPECT_EQ(v[0], 2 * 5 + 3 * 7);
  // Weights e1 - e2, e1 - e3, e2 - e4, e3 - e4 on GL4.
  std::vector<QVec> w = {from_ints({1, -1, 0, 0}), from_ints({1, 0, -1, 0}), from_ints({0, 1, 0, -1}),
                         from_ints({0, 0, 1, -1})};
  EXPECT_EQ(frip_weight(spec, w, 0), from_ints({1, 0, 0, -1}));
  EXPECT_EQ(frip_degree(spec, 0), 2);
}

TEST(Relinv, ValidationErrors) {
  OracleSpec spec;
  spec.kind = OracleKind::GlChain;
  spec.shape = {1, 2, 1};
  spec.slot_count = 4;
  spec.layout = {{0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 1, 0}};
  EXPECT_THROW(validate_oracle(spec), ShapeMismatch);
  spec.layout = {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}};
  EXPECT_THROW(validate_oracle(spec), ShapeMismatch);
  spec.shape = {2, 1, 2};
  spec.layout = {{0, 0, 0}, {0, 1, 0}, {1, 0, 0}, {1, 0, 1}};
  EXPECT_THROW(validate_oracle(spec), ShapeMismatch);
  EXPECT_THROW(parse_oracle_kind("nope"), ShapeMismatch);
  // Odd symplectic rows carry no invariant.
  OracleSpec sp;
  sp.kind = OracleKind::SpChain;
  sp.shape = {1, 4};
  sp.slot_count = 4;
  sp.layout = {{0, 0, 0}, {0, 0, 1}, {0, 0, 2}, {0, 0, 3}};
  EXPECT_THROW(validate_oracle(sp), ShapeMismatch);
  EXPECT_EQ(to_string(parse_oracle_kind("sp_chain")), "sp_chain");
}

TEST(Relinv, SkewAndSymChains) {
  // Skew 4x4 alone: FRIP is the Pfaffian.
  OracleSpec skew;
  skew.kind = OracleKind::SkewChain;
  skew.shape = {4};
  skew.slot_count = 6;
  for (int r = 0; r < 4; ++r)
    for (int c = r + 1; c < 4; ++c) skew.layout.push_back({0, r, c});
  validate_oracle(skew);
  QVec p = from_ints({1, 2, 3, 4, 5, 6});  // a01 a02 a03 a12 a13 a23
  EXPECT_EQ(evaluate_frips(skew, p)[0], Q(1 * 6 - 2 * 5 + 3 * 4));

  // (1,2) sym chain: x1 is 1x2, x2 symmetric 2x2; FRIPs x1 x2 x1^t and det x2.
  OracleSpec sym;
  sym.kind = OracleKind::SymChain;
  sym.shape = {1, 2};
  sym.slot_count = 5;
  sym.layout = {{0, 0, 0}, {0, 0, 1}, {1, 0, 0}, {1, 0, 1}, {1, 1, 1}};
  validate_oracle(sym);
  auto v = evaluate_frips(sym, from_ints({1, 2, 3, 4, 5}));
  ASSERT_EQ(v.size(), 2U);
  EXPECT_EQ(v[0], Q(3 + 2 * 2 * 4 + 4 * 5));
  EXPECT_EQ(v[1], Q(3 * 5 - 16));
}

TEST(Relinv, SamplePointIsDeterministic) {
  std::vector<bool> active = {true, false, true};
  EXPECT_EQ(sample_point(active, 10, 99), sample_point(active, 10, 99));
  QVec p = sample_point(active, 10, 99);
  EXPECT_EQ(p[1], 0);
  for (const auto& x : p) EXPECT_LE(abs(x), 10);
}
