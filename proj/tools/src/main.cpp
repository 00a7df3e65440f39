// Command-line front end: list built-in targets, generate IID sample files,
// run a benchmark against a sample file or the built-in MH sampler, and
// render histogram plots from saved reports.
//
// Exit codes: 0 all comparisons within 3 sigma, 1 usage error, 2 at least
// one metric beyond 3 sigma, 3 data error (unreadable/malformed input,
// capacity or degenerate-input failures).

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mcqual/catalog.hpp"
#include "mcqual/csv.hpp"
#include "mcqual/errors.hpp"
#include "mcqual/harness.hpp"
#include "mcqual/mh_sampler.hpp"
#include "mcqual/report.hpp"
#include "mcqual/rng.hpp"
#include "mcqual/version.hpp"

namespace {

using namespace mcqual;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDeviation = 2;
constexpr int kExitData = 3;

CatalogConfig load_catalog_config() {
  const char* path = std::getenv("MCQUAL_CONFIG");
  if (path != nullptr && *path != '\0') {
    return CatalogConfig::from_json_file(path);
  }
  return CatalogConfig::defaults();
}

double parse_double_value(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0') {
    throw ParameterError("invalid number for " + what + ": \"" + text + "\"");
  }
  return v;
}

int parse_int_value(const std::string& text, const std::string& what) {
  const double v = parse_double_value(text, what);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v) {
    throw ParameterError("expected an integer for " + what + ": \"" + text +
                         "\"");
  }
  return i;
}

// One --metric specification: "name" or "name:key=value,key=value".
// Families: mean, variance, chi2[:bins=], swd[:p=,L=], mmd[:sigma=],
// mmd_rff[:sigma=,D=].
MetricRequest parse_metric_spec(const std::string& spec) {
  std::string name = spec;
  std::vector<std::pair<std::string, std::string>> kvs;
  if (const std::size_t colon = spec.find(':'); colon != std::string::npos) {
    name = spec.substr(0, colon);
    std::string rest = spec.substr(colon + 1);
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const std::size_t comma = rest.find(',', pos);
      const std::string item =
          rest.substr(pos, comma == std::string::npos ? std::string::npos
                                                      : comma - pos);
      const std::size_t eq = item.find('=');
      if (item.empty() || eq == std::string::npos || eq == 0) {
        throw ParameterError("metric \"" + spec +
                             "\": expected key=value hyperparameters");
      }
      kvs.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }

  const auto reject_unknown = [&](std::initializer_list<const char*> keys) {
    for (const auto& [k, v] : kvs) {
      bool known = false;
      for (const char* key : keys) known = known || k == key;
      if (!known) {
        throw ParameterError("metric \"" + name + "\": unknown parameter \"" +
                             k + "\"");
      }
    }
  };
  const auto get = [&](const char* key) -> std::optional<std::string> {
    for (const auto& [k, v] : kvs) {
      if (k == key) return v;
    }
    return std::nullopt;
  };

  if (name == "mean" || name == "marginal_mean") {
    reject_unknown({});
    return MeanMetric{};
  }
  if (name == "variance" || name == "marginal_variance") {
    reject_unknown({});
    return VarianceMetric{};
  }
  if (name == "chi2" || name == "chi_square") {
    reject_unknown({"bins"});
    ChiSquareMetric m;
    if (const auto v = get("bins")) m.bins = parse_int_value(*v, "bins");
    return m;
  }
  if (name == "swd") {
    reject_unknown({"p", "L"});
    SwdMetric m;
    if (const auto v = get("p")) m.p = parse_double_value(*v, "p");
    if (const auto v = get("L")) m.L = parse_int_value(*v, "L");
    return m;
  }
  if (name == "mmd") {
    reject_unknown({"sigma", "cap"});
    MmdMetric m;
    if (const auto v = get("sigma")) {
      m.bandwidth = parse_double_value(*v, "sigma");
    }
    if (const auto v = get("cap")) m.median_cap = parse_int_value(*v, "cap");
    return m;
  }
  if (name == "mmd_rff") {
    reject_unknown({"sigma", "D", "cap"});
    MmdRffMetric m;
    if (const auto v = get("sigma")) {
      m.bandwidth = parse_double_value(*v, "sigma");
    }
    if (const auto v = get("D")) m.D = parse_int_value(*v, "D");
    if (const auto v = get("cap")) m.median_cap = parse_int_value(*v, "cap");
    return m;
  }
  throw ParameterError(
      "unknown metric \"" + name +
      "\"; available: mean, variance, chi2[:bins=], swd[:p=,L=], "
      "mmd[:sigma=,cap=], mmd_rff[:sigma=,D=,cap=]");
}

int cmd_list() {
  const std::vector<TargetPtr> all = catalog(load_catalog_config());
  std::size_t name_w = 4;
  for (const TargetPtr& t : all) name_w = std::max(name_w, t->name().size());
  std::printf("%-*s  %3s  %s\n", static_cast<int>(name_w), "NAME", "DIM",
              "PROPERTIES");
  for (const TargetPtr& t : all) {
    std::printf("%-*s  %3d  %s\n", static_cast<int>(name_w),
                t->name().c_str(), t->dimension(), t->description().c_str());
  }
  return kExitOk;
}

int cmd_sample(const std::string& testcase, std::size_t n,
               std::uint64_t seed, const std::string& out_path) {
  const TargetPtr target = find_target(testcase, load_catalog_config());
  const SampleBatch batch = target->sample_iid(n, seed);
  write_csv(batch, out_path);
  std::printf("wrote %zu samples from %s to %s\n",
              static_cast<std::size_t>(batch.size()),
              target->name().c_str(), out_path.c_str());
  return kExitOk;
}

struct RunArgs {
  std::string testcase;
  std::vector<std::string> metric_specs;
  std::size_t m = 100;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string input_file;  // empty: built-in MH sampler
  bool use_mh = false;
  std::size_t mh_steps = 0;  // 0: derived from m, n, and burn-in
  std::size_t mh_chains = 1;
  double mh_proposal_std = 1.0;
  std::optional<std::size_t> mh_burn_in;
  std::string out_dir = ".";
};

std::string mh_sampler_label(const MHConfig& cfg) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "mh(n_steps=%zu,n_chains=%zu,proposal_std=%g,burn_in=%zu)",
                cfg.n_steps, cfg.n_chains, cfg.proposal_std,
                cfg.effective_burn_in());
  return buf;
}

int cmd_run(const RunArgs& args) {
  if (args.metric_specs.empty()) {
    throw ParameterError(
        "run: at least one --metric is required (e.g. --metric mean "
        "--metric swd:p=1,L=50)");
  }
  if (args.use_mh == !args.input_file.empty()) {
    throw ParameterError(
        "run: choose exactly one sample source: --input FILE or --mh");
  }
  std::vector<MetricRequest> metrics;
  metrics.reserve(args.metric_specs.size());
  for (const std::string& spec : args.metric_specs) {
    metrics.push_back(parse_metric_spec(spec));
  }

  const CatalogConfig cat_cfg = load_catalog_config();
  const TargetPtr target = find_target(args.testcase, cat_cfg);

  std::string sampler_label;
  std::optional<SampleBatch> user;
  if (args.use_mh) {
    MHConfig mh;
    mh.n_chains = args.mh_chains;
    mh.proposal_std = args.mh_proposal_std;
    mh.burn_in = args.mh_burn_in;
    mh.seed = derive_seed(args.seed, 0, "mh-user");
    if (args.mh_steps > 0) {
      mh.n_steps = args.mh_steps;
    } else {
      // Just enough retained states per chain to cover the m*n the harness
      // partitions off, accounting for the default 10% burn-in.
      const std::size_t per_chain =
          (args.m * args.n + args.mh_chains - 1) / args.mh_chains;
      mh.n_steps = args.mh_burn_in
                       ? per_chain + *args.mh_burn_in
                       : (per_chain * 10 + 8) / 9 + 1;
    }
    sampler_label = mh_sampler_label(mh);
    user = metropolis_hastings(*target, mh);
  } else {
    sampler_label = "file:" + args.input_file;
    user = read_csv(args.input_file);
  }

  HarnessOptions opt;
  opt.m = args.m;
  opt.n = args.n;
  opt.seed = args.seed;
  opt.threads = args.threads;

  const std::vector<TestStatistic> ref =
      build_teststatistic_iid(*target, metrics, opt);
  const std::vector<TestStatistic> us =
      build_teststatistic_user(*target, metrics, *user, opt);
  const ComparisonSummary summary = compare(ref, us);

  ReportDocument doc;
  doc.testcase = target->name();
  doc.sampler = sampler_label;
  doc.seed = args.seed;
  doc.m = args.m;
  doc.n = args.n;
  doc.statistics = ref;
  doc.statistics.insert(doc.statistics.end(), us.begin(), us.end());
  doc.comparison = summary;

  std::filesystem::create_directories(args.out_dir);
  const std::string report_path = args.out_dir + "/report.json";
  const std::string svg_path = args.out_dir + "/overview.svg";
  write_report(doc, report_path);
  plot_overview(summary, svg_path);

  bool deviation = false;
  std::size_t metric_w = 6;
  for (const ComparisonRow& row : summary.rows) {
    metric_w = std::max(metric_w, row.metric.size());
  }
  std::printf("%s vs %s (m=%zu, n=%zu, seed=%llu)\n", target->name().c_str(),
              sampler_label.c_str(), args.m, args.n,
              static_cast<unsigned long long>(args.seed));
  for (const ComparisonRow& row : summary.rows) {
    std::printf("  %-*s  z=%+9.3f  std_ratio=%8.3f  %s%s\n",
                static_cast<int>(metric_w), row.metric.c_str(), row.z,
                row.std_ratio, row.band.c_str(),
                row.degenerate ? "  [degenerate reference]" : "");
    deviation = deviation || row.band == ">3sigma";
  }
  std::printf("report: %s\noverview: %s\n", report_path.c_str(),
              svg_path.c_str());
  std::printf("%s\n", deviation ? "DEVIATION: at least one metric beyond "
                                  "3 sigma"
                                : "PASS: all metrics within 3 sigma");
  return deviation ? kExitDeviation : kExitOk;
}

int cmd_plot(const std::string& report_path, const std::string& metric,
             int nbins, const std::string& out_path) {
  const ReportDocument doc = read_report(report_path);
  const TestStatistic* ref = nullptr;
  const TestStatistic* user = nullptr;
  for (const TestStatistic& ts : doc.statistics) {
    if (ts.metric != metric) continue;
    (ts.role == "user" ? user : ref) = &ts;
  }
  if (ref == nullptr || user == nullptr) {
    std::string available;
    for (const TestStatistic& ts : doc.statistics) {
      if (ts.role == "user") continue;
      available += available.empty() ? "" : ", ";
      available += ts.metric;
    }
    throw NotFoundError("metric \"" + metric + "\" not present in " +
                        report_path + " with both roles; available: " +
                        available);
  }
  plot_teststatistic(*ref, *user, nbins, out_path);
  std::printf("wrote %s\n", out_path.c_str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Monte Carlo sample-quality benchmark"};
  app.set_version_flag("--version", std::string("mcqual ") + kToolVersion);
  app.require_subcommand(1);

  CLI::App* list = app.add_subcommand("list", "List built-in target"
                                              " distributions");

  std::string testcase, out_path;
  std::size_t n = 10000;
  std::uint64_t seed = 0;
  CLI::App* sample =
      app.add_subcommand("sample", "Write IID samples from a target as CSV");
  sample->add_option("testcase", testcase, "target name (see `list`)")
      ->required();
  sample->add_option("-n,--n", n, "number of samples")
      ->check(CLI::PositiveNumber);
  sample->add_option("--seed", seed, "random seed");
  sample->add_option("-o,--out", out_path, "output CSV path")->required();

  RunArgs run_args;
  CLI::App* run = app.add_subcommand(
      "run", "Benchmark a sample source against IID references");
  run->add_option("testcase", run_args.testcase, "target name (see `list`)")
      ->required();
  run->add_option("--metric", run_args.metric_specs,
                  "metric spec, repeatable: mean | variance | chi2[:bins=B] "
                  "| swd[:p=P,L=L] | mmd[:sigma=S,cap=C] | "
                  "mmd_rff[:sigma=S,D=D,cap=C]")
      ->type_size(1);
  run->add_option("-m,--batches", run_args.m, "batches per statistic")
      ->check(CLI::PositiveNumber);
  run->add_option("-n,--batch-size", run_args.n, "points per batch")
      ->check(CLI::PositiveNumber);
  run->add_option("--seed", run_args.seed, "master seed");
  run->add_option("--threads", run_args.threads,
                  "worker threads (0 = all cores)");
  run->add_option("--input", run_args.input_file,
                  "user sample CSV (x_1..x_d[,weight][,logpdf])");
  run->add_flag("--mh", run_args.use_mh, "use the built-in MH sampler");
  run->add_option("--mh-steps", run_args.mh_steps,
                  "MH steps per chain (default: sized to cover m*n)");
  run->add_option("--mh-chains", run_args.mh_chains, "MH chain count")
      ->check(CLI::PositiveNumber);
  run->add_option("--mh-proposal-std", run_args.mh_proposal_std,
                  "MH proposal standard deviation");
  std::size_t burn_in_flag = 0;
  CLI::Option* burn_opt =
      run->add_option("--mh-burn-in", burn_in_flag,
                      "MH burn-in steps per chain (default: n_steps/10)");
  run->add_option("--out-dir", run_args.out_dir,
                  "directory for report.json and overview.svg");

  std::string report_path, metric_name;
  int nbins = 20;
  CLI::App* plot = app.add_subcommand(
      "plot", "Render a metric's histogram overlay from a report");
  plot->add_option("report", report_path, "report.json from `run`")
      ->required();
  plot->add_option("--metric", metric_name,
                   "metric name as it appears in the report")
      ->required();
  plot->add_option("--nbins", nbins, "histogram bins")
      ->check(CLI::PositiveNumber);
  plot->add_option("-o,--out", out_path, "output SVG path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (list->parsed()) return cmd_list();
    if (sample->parsed()) return cmd_sample(testcase, n, seed, out_path);
    if (run->parsed()) {
      if (burn_opt->count() > 0) run_args.mh_burn_in = burn_in_flag;
      return cmd_run(run_args);
    }
    return cmd_plot(report_path, metric_name, nbins, out_path);
  } catch (const ParameterError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const NotFoundError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    // FormatError, IoError, CapacityError, UnsupportedMetricError,
    // ProgressError, DegenerateInputError: problems with the data rather
    // than the invocation.
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitData;
  }
}
