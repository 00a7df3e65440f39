#include "mcqual/report.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <regex>
#include <string>
#include <vector>

#include "doctest.h"
#include "mcqual/errors.hpp"
#include "test_support.hpp"

using mcqual::ComparisonRow;
using mcqual::ComparisonSummary;
using mcqual::FormatError;
using mcqual::IoError;
using mcqual::ParameterError;
using mcqual::ReportDocument;
using mcqual::TestStatistic;

namespace {

TestStatistic make_stat(const std::string& metric, const std::string& role,
                        std::vector<double> values) {
  TestStatistic ts;
  ts.testcase = "t-case";
  ts.metric = metric;
  ts.role = role;
  ts.values = std::move(values);
  ts.mean = testsup::mean_of(ts.values);
  ts.std = testsup::sample_std(ts.values);
  return ts;
}

ReportDocument sample_document() {
  ReportDocument doc;
  doc.testcase = "t-case";
  doc.sampler = "mh(n_steps=100)";
  doc.seed = 1234567890123456789ULL;
  doc.m = 3;
  doc.n = 50;
  doc.statistics = {
      make_stat("marginal_mean[0]", "reference",
                {0.1 + 0.2, 1e-300, -1.0 / 3.0}),
      make_stat("marginal_mean[0]", "user",
                {6.02214076e23, std::numeric_limits<double>::denorm_min(),
                 -0.0}),
  };
  ComparisonRow row;
  row.metric = "marginal_mean[0]";
  row.z = 0.1 + 0.2;  // deliberately not representable as a short literal
  row.std_ratio = 1.0 / 3.0;
  row.band = "1sigma";
  row.degenerate = false;
  ComparisonRow row2;
  row2.metric = "marginal_variance[0]";
  row2.z = -7.25;
  row2.std_ratio = 0.0;
  row2.band = ">3sigma";
  row2.degenerate = true;
  doc.comparison.rows = {row, row2};
  return doc;
}

// Extracts (count, x) pairs for every histogram bar of one series, in
// document order.
std::vector<std::pair<int, double>> bars(const std::string& svg,
                                         const std::string& cls) {
  const std::regex re("class=\"" + cls +
                      "\" data-count=\"([0-9]+)\" x=\"([^\"]+)\"");
  std::vector<std::pair<int, double>> out;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re);
       it != std::sregex_iterator(); ++it) {
    out.emplace_back(std::stoi((*it)[1].str()), std::stod((*it)[2].str()));
  }
  return out;
}

double guide_x(const std::string& svg, const std::string& z_label) {
  const auto hits = testsup::find_all(
      svg,
      std::regex("class=\"guide\" data-z=\"" + z_label + "\" x1=\"([^\"]+)\""));
  REQUIRE(hits.size() == 1);
  return std::stod(hits[0]);
}

}  // namespace

TEST_SUITE("report") {

TEST_CASE("documents survive a write/read round trip bitwise") {
  testsup::TempDir dir;
  const std::string path = dir.file("report.json");
  const ReportDocument doc = sample_document();
  mcqual::write_report(doc, path);
  const ReportDocument back = mcqual::read_report(path);

  CHECK(back.schema_version == doc.schema_version);
  CHECK(back.tool_version == doc.tool_version);
  CHECK(back.testcase == doc.testcase);
  CHECK(back.sampler == doc.sampler);
  CHECK(back.seed == doc.seed);
  CHECK(back.m == doc.m);
  CHECK(back.n == doc.n);

  REQUIRE(back.statistics.size() == doc.statistics.size());
  for (std::size_t i = 0; i < doc.statistics.size(); ++i) {
    CAPTURE(i);
    CHECK(back.statistics[i].testcase == doc.testcase);
    CHECK(back.statistics[i].metric == doc.statistics[i].metric);
    CHECK(back.statistics[i].role == doc.statistics[i].role);
    REQUIRE(back.statistics[i].values == doc.statistics[i].values);
    CHECK(back.statistics[i].mean == doc.statistics[i].mean);
    CHECK(back.statistics[i].std == doc.statistics[i].std);
  }
  // Negative zero keeps its sign through the 17-digit rendering.
  CHECK(std::signbit(back.statistics[1].values[2]));

  REQUIRE(back.comparison.rows.size() == doc.comparison.rows.size());
  for (std::size_t i = 0; i < doc.comparison.rows.size(); ++i) {
    CAPTURE(i);
    CHECK(back.comparison.rows[i].metric == doc.comparison.rows[i].metric);
    CHECK(back.comparison.rows[i].z == doc.comparison.rows[i].z);
    CHECK(back.comparison.rows[i].std_ratio ==
          doc.comparison.rows[i].std_ratio);
    CHECK(back.comparison.rows[i].band == doc.comparison.rows[i].band);
    CHECK(back.comparison.rows[i].degenerate ==
          doc.comparison.rows[i].degenerate);
  }
}

TEST_CASE("writing the same document twice gives identical bytes") {
  testsup::TempDir dir;
  const ReportDocument doc = sample_document();
  mcqual::write_report(doc, dir.file("a.json"));
  mcqual::write_report(doc, dir.file("b.json"));
  CHECK(testsup::read_file(dir.file("a.json")) ==
        testsup::read_file(dir.file("b.json")));
}

TEST_CASE("malformed report files raise format errors") {
  testsup::TempDir dir;

  SUBCASE("missing schema version") {
    const std::string p = dir.file("r.json");
    testsup::write_file(p, "{\"tool_version\": \"0.1.0\"}\n");
    try {
      mcqual::read_report(p);
      FAIL("expected FormatError");
    } catch (const FormatError& e) {
      CHECK(std::string(e.what()).find("schema_version") !=
            std::string::npos);
    }
  }

  SUBCASE("unknown schema version") {
    const std::string p = dir.file("r.json");
    ReportDocument doc = sample_document();
    mcqual::write_report(doc, p);
    std::string text = testsup::read_file(p);
    const std::string needle = "\"schema_version\": 1";
    const auto pos = text.find(needle);
    REQUIRE(pos != std::string::npos);
    text.replace(pos, needle.size(), "\"schema_version\": 99");
    testsup::write_file(p, text);
    CHECK_THROWS_AS(mcqual::read_report(p), FormatError);
  }

  SUBCASE("not JSON at all") {
    const std::string p = dir.file("r.json");
    testsup::write_file(p, "{not json");
    CHECK_THROWS_AS(mcqual::read_report(p), FormatError);
  }

  SUBCASE("statistics with the wrong shape") {
    const std::string p = dir.file("r.json");
    testsup::write_file(
        p,
        "{\"schema_version\": 1, \"tool_version\": \"0.1.0\","
        " \"testcase\": \"t\", \"sampler\": \"s\", \"seed\": 0,"
        " \"m\": 1, \"n\": 1, \"statistics\": 42, \"comparison\": []}\n");
    CHECK_THROWS_AS(mcqual::read_report(p), FormatError);
  }

  SUBCASE("unreadable path") {
    CHECK_THROWS_AS(mcqual::read_report(dir.file("missing.json")), IoError);
  }
}

TEST_CASE("merging concatenates batches and recomputes the comparison") {
  ReportDocument a;
  a.testcase = "t";
  a.sampler = "s";
  a.seed = 111;
  a.m = 2;
  a.n = 40;
  a.statistics = {make_stat("m1", "reference", {1.0, 2.0}),
                  make_stat("m1", "user", {10.0, 11.0})};

  ReportDocument b = a;
  b.seed = 222;
  b.m = 3;
  b.statistics = {make_stat("m1", "reference", {3.0, 4.0, 5.0}),
                  make_stat("m1", "user", {12.0, 13.0, 14.0})};

  const ReportDocument merged = mcqual::merge_reports(a, b);
  CHECK(merged.seed == 111);  // first document wins for identity fields
  CHECK(merged.m == 5);
  CHECK(merged.n == 40);
  REQUIRE(merged.statistics.size() == 2);
  CHECK(merged.statistics[0].values ==
        std::vector<double>{1.0, 2.0, 3.0, 4.0, 5.0});
  CHECK(merged.statistics[0].mean == 3.0);
  CHECK(merged.statistics[0].std ==
        doctest::Approx(std::sqrt(2.5)).epsilon(1e-15));
  CHECK(merged.statistics[1].mean == 12.0);

  REQUIRE(merged.comparison.rows.size() == 1);
  CHECK(merged.comparison.rows[0].z ==
        doctest::Approx(9.0 / std::sqrt(2.5)).epsilon(1e-14));
  CHECK(merged.comparison.rows[0].std_ratio ==
        doctest::Approx(1.0).epsilon(1e-15));
  CHECK(merged.comparison.rows[0].band == ">3sigma");
}

TEST_CASE("merging rejects documents from different runs") {
  ReportDocument a;
  a.testcase = "t";
  a.sampler = "s";
  a.m = 1;
  a.n = 10;
  a.statistics = {make_stat("m1", "reference", {1.0, 2.0})};
  ReportDocument b = a;

  SUBCASE("testcase differs") {
    b.testcase = "other";
    CHECK_THROWS_AS(mcqual::merge_reports(a, b), ParameterError);
  }
  SUBCASE("batch size differs") {
    b.n = 11;
    CHECK_THROWS_AS(mcqual::merge_reports(a, b), ParameterError);
  }
  SUBCASE("metric set differs") {
    b.statistics = {make_stat("m2", "reference", {1.0, 2.0})};
    CHECK_THROWS_AS(mcqual::merge_reports(a, b), ParameterError);
  }
  SUBCASE("statistic count differs") {
    b.statistics.push_back(make_stat("m2", "user", {1.0}));
    CHECK_THROWS_AS(mcqual::merge_reports(a, b), ParameterError);
  }
}

TEST_CASE("overview markers land on the z axis where they should") {
  testsup::TempDir dir;

  ComparisonSummary summary;
  for (const char* name : {"alpha", "beta", "gamma"}) {
    ComparisonRow row;
    row.metric = name;
    row.z = 0.0;
    row.std_ratio = 1.0;
    row.band = "1sigma";
    summary.rows.push_back(row);
  }
  const std::string p0 = dir.file("zero.svg");
  mcqual::plot_overview(summary, p0);
  const std::string svg0 = testsup::read_file(p0);

  CHECK_FALSE(testsup::xml_problem(svg0).has_value());
  CHECK(testsup::svg_self_contained(svg0));

  const double x_zero = guide_x(svg0, "0");
  const auto markers = testsup::find_all(
      svg0, std::regex("class=\"marker\" cx=\"([^\"]+)\""));
  REQUIRE(markers.size() == 3);
  for (const std::string& cx : markers) {
    CHECK(std::stod(cx) == doctest::Approx(x_zero).epsilon(1e-6));
  }
  const auto names = testsup::find_all(
      svg0,
      std::regex("class=\"metric-row\" data-metric=\"([^\"]+)\""));
  REQUIRE(names.size() == 3);
  CHECK(names[0] == "alpha");
  CHECK(names[2] == "gamma");

  // A z of +-2.5 sits strictly between the 2 and 3 sigma guides.
  summary.rows.resize(2);
  summary.rows[0].z = 2.5;
  summary.rows[0].band = "3sigma";
  summary.rows[1].z = -2.5;
  summary.rows[1].band = "3sigma";
  const std::string p1 = dir.file("mid.svg");
  mcqual::plot_overview(summary, p1);
  const std::string svg1 = testsup::read_file(p1);
  const auto mid = testsup::find_all(
      svg1, std::regex("class=\"marker\" cx=\"([^\"]+)\""));
  REQUIRE(mid.size() == 2);
  CHECK(std::stod(mid[0]) > guide_x(svg1, "2"));
  CHECK(std::stod(mid[0]) < guide_x(svg1, "3"));
  CHECK(std::stod(mid[1]) < guide_x(svg1, "-2"));
  CHECK(std::stod(mid[1]) > guide_x(svg1, "-3"));
}

TEST_CASE("off-scale scores render as clipped arrows") {
  testsup::TempDir dir;
  ComparisonSummary summary;
  ComparisonRow row;
  row.metric = "huge";
  row.z = 7.0;
  row.std_ratio = 1.0;
  row.band = ">3sigma";
  summary.rows.push_back(row);
  const std::string p = dir.file("clip.svg");
  mcqual::plot_overview(summary, p);
  const std::string svg = testsup::read_file(p);
  CHECK(svg.find("class=\"clip-arrow\"") != std::string::npos);
  CHECK(svg.find("class=\"marker\"") == std::string::npos);
  CHECK_FALSE(testsup::xml_problem(svg).has_value());
}

TEST_CASE("overview rendering is deterministic and validates input") {
  testsup::TempDir dir;
  ComparisonSummary summary;
  ComparisonRow row;
  row.metric = "m";
  row.z = 1.25;
  row.std_ratio = 0.8;
  row.band = "2sigma";
  summary.rows.push_back(row);
  mcqual::plot_overview(summary, dir.file("a.svg"));
  mcqual::plot_overview(summary, dir.file("b.svg"));
  CHECK(testsup::read_file(dir.file("a.svg")) ==
        testsup::read_file(dir.file("b.svg")));

  CHECK_THROWS_AS(mcqual::plot_overview(ComparisonSummary{}, dir.file("e.svg")),
                  ParameterError);
  CHECK_THROWS_AS(
      mcqual::plot_overview(summary, "/nonexistent-dir/x/y/z.svg"), IoError);
}

TEST_CASE("histograms bin every batch value exactly once") {
  testsup::TempDir dir;
  const TestStatistic ref =
      make_stat("m", "reference", {0.1, 0.2, 0.35, 0.5, 0.55, 0.8, 0.95});
  const TestStatistic user =
      make_stat("m", "user", {0.15, 0.3, 0.42, 0.61, 0.7});

  const std::string p = dir.file("hist.svg");
  mcqual::plot_teststatistic(ref, user, 4, p);
  const std::string svg = testsup::read_file(p);
  CHECK_FALSE(testsup::xml_problem(svg).has_value());
  CHECK(testsup::svg_self_contained(svg));

  const auto ref_bars = bars(svg, "bar-ref");
  const auto user_bars = bars(svg, "bar-user");
  REQUIRE(ref_bars.size() == 4);
  REQUIRE(user_bars.size() == 4);
  int ref_total = 0, user_total = 0;
  for (const auto& [c, x] : ref_bars) ref_total += c;
  for (const auto& [c, x] : user_bars) user_total += c;
  CHECK(ref_total == 7);
  CHECK(user_total == 5);
}

TEST_CASE("identical roles produce identical histogram series") {
  testsup::TempDir dir;
  const TestStatistic ref =
      make_stat("m", "reference", {1.0, 2.0, 2.5, 3.0, 4.0, 4.5});
  TestStatistic user = ref;
  user.role = "user";
  const std::string p = dir.file("same.svg");
  mcqual::plot_teststatistic(ref, user, 6, p);
  const std::string svg = testsup::read_file(p);
  const auto ref_bars = bars(svg, "bar-ref");
  const auto user_bars = bars(svg, "bar-user");
  REQUIRE(ref_bars.size() == user_bars.size());
  for (std::size_t i = 0; i < ref_bars.size(); ++i) {
    CAPTURE(i);
    CHECK(ref_bars[i].first == user_bars[i].first);
    CHECK(ref_bars[i].second == user_bars[i].second);
  }
}

TEST_CASE("a single bin swallows everything") {
  testsup::TempDir dir;
  const TestStatistic ref = make_stat("m", "reference", {1.0, 5.0, 9.0});
  const TestStatistic user = make_stat("m", "user", {2.0, 3.0});
  const std::string p = dir.file("one.svg");
  mcqual::plot_teststatistic(ref, user, 1, p);
  const std::string svg = testsup::read_file(p);
  const auto ref_bars = bars(svg, "bar-ref");
  REQUIRE(ref_bars.size() == 1);
  CHECK(ref_bars[0].first == 3);
  const auto user_bars = bars(svg, "bar-user");
  REQUIRE(user_bars.size() == 1);
  CHECK(user_bars[0].first == 2);
}

TEST_CASE("disjoint distributions occupy disjoint bins") {
  testsup::TempDir dir;
  const TestStatistic ref =
      make_stat("m", "reference", {0.0, 0.3, 0.7, 1.0});
  const TestStatistic user =
      make_stat("m", "user", {10.0, 10.4, 10.8, 11.0});
  const std::string p = dir.file("disjoint.svg");
  mcqual::plot_teststatistic(ref, user, 10, p);
  const std::string svg = testsup::read_file(p);

  double ref_max_x = -1e300, user_min_x = 1e300;
  for (const auto& [c, x] : bars(svg, "bar-ref")) {
    if (c > 0) ref_max_x = std::max(ref_max_x, x);
  }
  for (const auto& [c, x] : bars(svg, "bar-user")) {
    if (c > 0) user_min_x = std::min(user_min_x, x);
  }
  CHECK(ref_max_x < user_min_x);
}

TEST_CASE("histogram rendering validates its inputs") {
  testsup::TempDir dir;
  const TestStatistic ref = make_stat("m", "reference", {1.0, 2.0});
  TestStatistic other = make_stat("different", "user", {1.0, 2.0});
  CHECK_THROWS_AS(
      mcqual::plot_teststatistic(ref, other, 5, dir.file("x.svg")),
      ParameterError);
  TestStatistic user = make_stat("m", "user", {1.0, 2.0});
  CHECK_THROWS_AS(
      mcqual::plot_teststatistic(ref, user, 0, dir.file("x.svg")),
      ParameterError);
  TestStatistic empty = make_stat("m", "user", {1.0});
  empty.values.clear();
  CHECK_THROWS_AS(
      mcqual::plot_teststatistic(ref, empty, 5, dir.file("x.svg")),
      ParameterError);
}

}  // TEST_SUITE
