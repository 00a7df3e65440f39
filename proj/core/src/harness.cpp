#include "mcqual/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>

#include "mcqual/errors.hpp"
#include "mcqual/metrics_basic.hpp"
#include "mcqual/mmd.hpp"
#include "mcqual/rng.hpp"
#include "mcqual/swd.hpp"

namespace mcqual {

namespace {

std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string sigma_label(const std::optional<double>& bandwidth) {
  return bandwidth ? fmt_g(*bandwidth) : "median";
}

// Runs job(0..count-1) on up to `threads` workers. Indices are handed out
// by an atomic counter but every job writes only into its own slot, so the
// assembled result is independent of scheduling. The first exception thrown
// by any job is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads,
                  const std::function<void(std::size_t)>& job) {
  int t = threads > 0 ? threads
                      : static_cast<int>(std::thread::hardware_concurrency());
  if (t < 1) t = 1;
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(t), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        job(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// Requests split by arity, with resolved per-statistic names and the
// derived seeds for metric-internal randomness (shared across batches so
// reference and user statistics are conditioned on the same projections
// and features).
struct Plan {
  std::vector<MetricRequest> one_sample;
  std::vector<MetricRequest> two_sample;
  std::vector<std::uint64_t> two_sample_seeds;
  std::vector<std::string> names;  // one-sample slots, then two-sample slots
  std::size_t one_slots = 0;
  std::size_t slots() const { return names.size(); }
};

Plan make_plan(const Target& target,
               const std::vector<MetricRequest>& metrics,
               const HarnessOptions& opt) {
  if (opt.m < 2) throw ParameterError("harness: m must be >= 2");
  if (opt.n < 2) throw ParameterError("harness: n must be >= 2");
  if (metrics.empty()) throw ParameterError("harness: no metrics requested");

  Plan plan;
  const int d = target.dimension();
  for (const MetricRequest& req : metrics) {
    if (is_two_sample(req)) continue;
    if (std::holds_alternative<ChiSquareMetric>(req) &&
        !target.has_marginal_cdf()) {
      throw UnsupportedMetricError("chi_square is unsupported on " +
                                   target.name() +
                                   ": no analytic marginal CDF");
    }
    plan.one_sample.push_back(req);
    const std::string base = metric_request_name(req);
    for (int i = 0; i < d; ++i) {
      plan.names.push_back(base + "[" + std::to_string(i) + "]");
    }
  }
  plan.one_slots = plan.names.size();
  for (const MetricRequest& req : metrics) {
    if (!is_two_sample(req)) continue;
    plan.two_sample.push_back(req);
    const std::string name = metric_request_name(req);
    plan.two_sample_seeds.push_back(
        derive_seed(opt.seed, 0, "metric:" + name));
    plan.names.push_back(name);
  }
  return plan;
}

void eval_one_sample(const Plan& plan, const SampleBatch& batch,
                     const Target& target, double* out) {
  for (const MetricRequest& req : plan.one_sample) {
    std::vector<MetricValue> vals;
    if (std::holds_alternative<MeanMetric>(req)) {
      vals = marginal_mean(batch);
    } else if (std::holds_alternative<VarianceMetric>(req)) {
      vals = marginal_variance(batch);
    } else {
      vals = chi_square_marginal(batch, target,
                                 std::get<ChiSquareMetric>(req).bins);
    }
    for (const MetricValue& v : vals) *out++ = v.value;
  }
}

void eval_two_sample(const Plan& plan, const SampleBatch& a,
                     const SampleBatch& b, double* out) {
  for (std::size_t k = 0; k < plan.two_sample.size(); ++k) {
    const MetricRequest& req = plan.two_sample[k];
    const std::uint64_t seed = plan.two_sample_seeds[k];
    if (const SwdMetric* swd = std::get_if<SwdMetric>(&req)) {
      *out++ = sliced_wasserstein(a, b, SwdConfig{swd->L, swd->p, seed});
    } else if (const MmdMetric* mmd = std::get_if<MmdMetric>(&req)) {
      const double sigma = mmd->bandwidth
                               ? *mmd->bandwidth
                               : median_heuristic(a, b, mmd->median_cap);
      *out++ = mmd_exact(a, b, sigma);
    } else {
      const MmdRffMetric& rff = std::get<MmdRffMetric>(req);
      const double sigma = rff.bandwidth
                               ? *rff.bandwidth
                               : median_heuristic(a, b, rff.median_cap);
      *out++ = mmd_rff(a, b, sigma, rff.D, seed);
    }
  }
}

std::vector<TestStatistic> assemble(const Plan& plan, const Target& target,
                                    const std::vector<double>& results,
                                    std::size_t m, const std::string& role) {
  std::vector<TestStatistic> stats;
  stats.reserve(plan.slots());
  for (std::size_t s = 0; s < plan.slots(); ++s) {
    TestStatistic ts;
    ts.testcase = target.name();
    ts.metric = plan.names[s];
    ts.role = role;
    ts.values.resize(m);
    double sum = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      ts.values[i] = results[i * plan.slots() + s];
      sum += ts.values[i];
    }
    ts.mean = sum / static_cast<double>(m);
    double ss = 0.0;
    for (double v : ts.values) ss += (v - ts.mean) * (v - ts.mean);
    ts.std = std::sqrt(ss / static_cast<double>(m - 1));
    stats.push_back(std::move(ts));
  }
  return stats;
}

}  // namespace

std::string metric_request_name(const MetricRequest& request) {
  if (std::holds_alternative<MeanMetric>(request)) return "marginal_mean";
  if (std::holds_alternative<VarianceMetric>(request)) {
    return "marginal_variance";
  }
  if (std::holds_alternative<ChiSquareMetric>(request)) return "chi_square";
  if (const SwdMetric* swd = std::get_if<SwdMetric>(&request)) {
    return "swd(p=" + fmt_g(swd->p) + ",L=" + std::to_string(swd->L) + ")";
  }
  if (const MmdMetric* mmd = std::get_if<MmdMetric>(&request)) {
    return "mmd(σ=" + sigma_label(mmd->bandwidth) + ")";
  }
  const MmdRffMetric& rff = std::get<MmdRffMetric>(request);
  return "mmd_rff(σ=" + sigma_label(rff.bandwidth) +
         ",D=" + std::to_string(rff.D) + ")";
}

bool is_two_sample(const MetricRequest& request) {
  return std::holds_alternative<SwdMetric>(request) ||
         std::holds_alternative<MmdMetric>(request) ||
         std::holds_alternative<MmdRffMetric>(request);
}

std::vector<TestStatistic> build_teststatistic_iid(
    const Target& target, const std::vector<MetricRequest>& metrics,
    const HarnessOptions& opt) {
  const Plan plan = make_plan(target, metrics, opt);
  std::vector<double> results(opt.m * plan.slots());
  parallel_for(opt.m, opt.threads, [&](std::size_t i) {
    double* row = &results[i * plan.slots()];
    if (plan.one_slots > 0) {
      const SampleBatch batch =
          target.sample_iid(opt.n, derive_seed(opt.seed, i, "iid-batch"));
      eval_one_sample(plan, batch, target, row);
    }
    if (!plan.two_sample.empty()) {
      const SampleBatch a =
          target.sample_iid(opt.n, derive_seed(opt.seed, i, "pair-a"));
      const SampleBatch b =
          target.sample_iid(opt.n, derive_seed(opt.seed, i, "pair-b"));
      eval_two_sample(plan, a, b, row + plan.one_slots);
    }
  });
  return assemble(plan, target, results, opt.m, "iid-reference");
}

std::vector<TestStatistic> build_teststatistic_user(
    const Target& target, const std::vector<MetricRequest>& metrics,
    const SampleBatch& user, const HarnessOptions& opt) {
  const Plan plan = make_plan(target, metrics, opt);
  if (user.dimension() != target.dimension()) {
    throw ParameterError("harness: user batch dimension " +
                         std::to_string(user.dimension()) +
                         " does not match target dimension " +
                         std::to_string(target.dimension()));
  }
  const std::vector<SampleBatch> chunks = partition(user, opt.m, opt.n);
  std::vector<double> results(opt.m * plan.slots());
  parallel_for(opt.m, opt.threads, [&](std::size_t i) {
    double* row = &results[i * plan.slots()];
    if (plan.one_slots > 0) {
      eval_one_sample(plan, chunks[i], target, row);
    }
    if (!plan.two_sample.empty()) {
      const SampleBatch fresh =
          target.sample_iid(opt.n, derive_seed(opt.seed, i, "user-iid"));
      const SampleBatch resampled = weighted_resample(
          chunks[i], opt.n, derive_seed(opt.seed, i, "user-resample"));
      eval_two_sample(plan, fresh, resampled, row + plan.one_slots);
    }
  });
  return assemble(plan, target, results, opt.m, "user");
}

Normalized normalize(double value, double ref_mean, double ref_std) {
  if (ref_std < 1e-300) {
    return {value - ref_mean, true};
  }
  return {(value - ref_mean) / ref_std, false};
}

std::string band_label(double z) {
  const double a = std::abs(z);
  if (a <= 1.0) return "1sigma";
  if (a <= 2.0) return "2sigma";
  if (a <= 3.0) return "3sigma";
  return ">3sigma";
}

ComparisonSummary compare(const std::vector<TestStatistic>& ref,
                          const std::vector<TestStatistic>& user) {
  if (ref.size() != user.size()) {
    throw ParameterError("compare: statistic lists differ in length");
  }
  ComparisonSummary summary;
  summary.rows.reserve(ref.size());
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (ref[i].metric != user[i].metric) {
      throw ParameterError("compare: metric mismatch at position " +
                           std::to_string(i) + " (" + ref[i].metric +
                           " vs " + user[i].metric + ")");
    }
    ComparisonRow row;
    row.metric = ref[i].metric;
    const Normalized norm = normalize(user[i].mean, ref[i].mean, ref[i].std);
    row.z = norm.z;
    row.degenerate = norm.degenerate;
    row.std_ratio =
        norm.degenerate ? user[i].std : user[i].std / ref[i].std;
    row.band = band_label(row.z);
    summary.rows.push_back(std::move(row));
  }
  return summary;
}

}  // namespace mcqual
