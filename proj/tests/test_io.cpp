#include <gtest/gtest.h>

#include "golden.hpp"
#include "pvsa/io.hpp"

using namespace pvsa;

namespace {

std::string where_of(const std::string& text) {
  try {
    parse_instance(text);
  } catch (const ParseError& e) {
    return e.where;
  }
  return "<accepted>";
}

const char* kBinaryQuadratics = R"({
  "name": "binary quadratics",
  "root_datum": "C2",
  "g_simple": [1],
  "psi_v": [[0, 2], [1, 1], [2, 0]],
  "oracle": {"kind": "sym_chain", "shape": [2], "layout": [[0,1,1],[0,0,1],[0,0,0]]},
  "seed": 7
})";

}  // namespace

TEST(Io, SyntaxErrorsCarryLineAndColumn) {
  EXPECT_EQ(where_of("{\n  \"root_datum\": \"G2\",\n  oops\n}"), "line 3:3");
}

TEST(Io, FieldErrorsNameTheField) {
  EXPECT_EQ(where_of(R"({"root_datum": "C2", "g_simple": [1], "psi_v": [[0, 2], [1, 1, 0]]})"), "psi_v[1]");
  EXPECT_EQ(where_of(R"({"root_datum": "C2", "g_simple": [3], "psi_v": [[0, 2]]})"), "g_simple[0]");
  EXPECT_EQ(where_of(R"({"g_simple": [1], "psi_v": [[0, 2]]})"), "root_datum");
  EXPECT_EQ(where_of(R"({"root_datum": "Q2", "g_simple": [1], "psi_v": [[0, 2]]})"), "root_datum");
  EXPECT_EQ(where_of(R"({"root_datum": "C2", "g_simple": [1], "psi_v": [{"weight": [0, 2], "mult": 0}]})"),
            "psi_v[0].mult");
  EXPECT_EQ(where_of(R"({"root_datum": "C2", "g_simple": [1], "psi_v": [[0, "x"]]})"), "psi_v[0][1]");
  EXPECT_EQ(where_of(R"({"dk": {"type": "F4", "h": [0, 2, 0]}})"), "dk.h");
  EXPECT_EQ(where_of(R"({"dk": {"type": "F4", "h": [0, 2, 0, 0]}, "psi_v": []})"), "<root>");
  EXPECT_EQ(where_of(R"({"dk": {"type": "F4", "h": [0, 2, 0, 0]}, "caps": {"max_weights": 0}})"), "caps.max_weights");
  EXPECT_EQ(where_of(R"({"dk": {"type": "G2", "h": [0, 2]}, "ifd": [{"label": "x", "q": [2], "hL": [0, 0]}]})"),
            "ifd[0].hL");
  EXPECT_EQ(where_of(R"({"root_datum": "C2", "g_simple": [1], "psi_v": [[0, 2], [0, 2]]})"), "psi_v[1]");
}

TEST(Io, OracleNeedsSeed) {
  std::string text = kBinaryQuadratics;
  text.replace(text.find(",\n  \"seed\": 7"), std::string(",\n  \"seed\": 7").size(), "");
  EXPECT_EQ(where_of(text), "seed");
  EXPECT_NO_THROW(parse_instance(kBinaryQuadratics));
}

TEST(Io, ExplicitInstanceMatchesDk) {
  // The layout above is replaced by the one the DK builder generates.
  InstanceFile dk = parse_instance(R"({"name": "bq", "dk": {"type": "C2", "h": [0, 2]}, "seed": 7})");
  Json explicit_form = instance_to_json(dk.instance);
  InstanceFile back = parse_instance(explicit_form.dump());
  EXPECT_EQ(back.instance.psi_v, dk.instance.psi_v);
  EXPECT_EQ(back.instance.fund_chars, dk.instance.fund_chars);
  EXPECT_EQ(back.instance.g_simple, dk.instance.g_simple);
  Json a = analyze_report(dk), b = analyze_report(back);
  for (const char* key : {"spcl", "hasse", "exceptional", "convergence", "cf_decomposition"})
    EXPECT_EQ(a[key], b[key]) << key;
}

TEST(Io, DkRoundTripThroughReport) {
  RootDatum f4 = build_root_datum("F4");
  PvsInstance inst = build_dk_pvs(f4, {0, 2, 0, 0});
  Json rep = dk_report(inst, {0, 2, 0, 0}, std::string("binary_cubic_disc_sym3"));
  EXPECT_EQ(rep["psi_v"].size(), 12U);
  InstanceFile again = parse_instance(rep.dump());
  InstanceFile direct = parse_instance(R"({"dk": {"type": "F4", "h": [0, 2, 0, 0]}, "seed": 1})");
  Json a = analyze_report(again), b = analyze_report(direct);
  EXPECT_EQ(a["spcl"], b["spcl"]);
  EXPECT_EQ(a["hasse"], b["hasse"]);
  EXPECT_EQ(a["spcl"].size(), 6U);
}

TEST(Io, ReportsAreDeterministic) {
  InstanceFile f = parse_instance(R"({"dk": {"type": "G2", "h": [0, 2]}, "seed": 3,
                                      "ifd": [{"label": "beta", "q": [2], "hL": [0]}]})");
  EXPECT_EQ(analyze_report(f).dump(), analyze_report(f).dump());
  AnalyzeOptions serial;
  serial.jobs = 1;
  EXPECT_EQ(analyze_report(f, serial).dump(), analyze_report(f).dump());
  Json ifd = ifd_report(f);
  EXPECT_EQ(ifd.dump(), ifd_report(f, 1).dump());
  std::string text = render_text(analyze_report(f));
  EXPECT_NE(text.find("spcl"), std::string::npos);
}

TEST(Io, AnalyzeBinaryQuadratics) {
  InstanceFile f = parse_instance(R"({"dk": {"type": "C2", "h": [0, 2]}, "seed": 7})");
  AnalyzeOptions opts;
  opts.extra_mu = {{Q(1, 4)}, {Q(1)}};
  Json r = analyze_report(f, opts);
  ASSERT_EQ(r["spcl"].size(), 2U);
  EXPECT_EQ(r["spcl"][1]["exceptional"]["status"], "yes");
  EXPECT_EQ(r["exceptional"]["not_exceptional"], Json::array({"S0"}));
  std::size_t failures = 0;
  for (const auto& c : r["convergence"])
    if (c["positive"] == false) ++failures;
  EXPECT_EQ(failures, 3U);
}

TEST(Io, RationalJson) {
  EXPECT_EQ(rational_json(Q(3)), Json(3));
  EXPECT_EQ(rational_json(Q(3, 2)), Json("3/2"));
  EXPECT_EQ(ray_json(from_ints({2, -2})), Json::array({1, -1}));
}
