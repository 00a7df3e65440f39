#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mcqual/sample_batch.hpp"
#include "mcqual/targets.hpp"

namespace mcqual {

/// Metric families the harness can evaluate, with their hyperparameters.
/// The first three are one-sample metrics (evaluated on a single batch,
/// one value per coordinate); the rest are two-sample distances (evaluated
/// between a reference batch and a comparison batch, one value total).
struct MeanMetric {};
struct VarianceMetric {};
struct ChiSquareMetric {
  int bins = 50;
};
struct SwdMetric {
  double p = 1.0;
  int L = 50;
};
struct MmdMetric {
  std::optional<double> bandwidth;  ///< absent: median heuristic per pair
  int median_cap = 1000;
};
struct MmdRffMetric {
  std::optional<double> bandwidth;  ///< absent: median heuristic per pair
  int median_cap = 1000;
  int D = 1000;
};

using MetricRequest = std::variant<MeanMetric, VarianceMetric,
                                   ChiSquareMetric, SwdMetric, MmdMetric,
                                   MmdRffMetric>;

/// Serialized family name, hyperparameters included, e.g. "swd(p=1,L=50)"
/// or "mmd(σ=median)". Coordinate-resolved names ("marginal_mean[0]") are
/// produced per dimension when statistics are built.
std::string metric_request_name(const MetricRequest& request);

/// True for the two-sample distance metrics (SWD and the MMD variants).
bool is_two_sample(const MetricRequest& request);

/// Sampling distribution of one metric over m batches.
struct TestStatistic {
  std::string testcase;
  std::string metric;           ///< resolved name, e.g. "marginal_mean[1]"
  std::string role;             ///< "iid-reference" or "user"
  std::vector<double> values;   ///< one entry per batch (length m)
  double mean = 0.0;
  double std = 0.0;             ///< sample std, m-1 denominator
};

/// One normalized user-vs-reference verdict.
struct ComparisonRow {
  std::string metric;
  double z = 0.0;          ///< (mean_user - mean_ref) / std_ref
  double std_ratio = 0.0;  ///< std_user / std_ref
  std::string band;        ///< "1sigma", "2sigma", "3sigma", ">3sigma"
  /// Set when std_ref is numerically zero; z and std_ratio then hold the
  /// raw difference and the raw user std instead of normalized values.
  bool degenerate = false;
};

struct ComparisonSummary {
  std::vector<ComparisonRow> rows;
};

struct HarnessOptions {
  std::size_t m = 100;    ///< batches per statistic, >= 2
  std::size_t n = 10000;  ///< points per batch, >= 2
  std::uint64_t seed = 0;
  int threads = 0;        ///< worker threads; 0 = hardware concurrency
};

/// Builds the IID reference distribution of every requested metric:
/// one-sample metrics see m fresh IID batches of size n; two-sample metrics
/// see m independent fresh IID batch pairs. All batch seeds derive from
/// opt.seed, and metric-internal randomness (projection directions, Fourier
/// features) derives from opt.seed once per metric, shared across batches.
/// Results are identical for any thread count.
///
/// Throws ParameterError for m < 2, n < 2, or an empty metric list, and
/// UnsupportedMetricError for a metric/target mismatch (for example
/// chi_square on a target without an analytic marginal CDF).
std::vector<TestStatistic> build_teststatistic_iid(
    const Target& target, const std::vector<MetricRequest>& metrics,
    const HarnessOptions& opt);

/// Builds the same statistics from a user-supplied batch: the batch is
/// partitioned into m chunks carrying n effective samples each; one-sample
/// metrics are evaluated on the (possibly weighted) chunks, two-sample
/// metrics between a fresh IID batch of size n and the chunk resampled to
/// n unweighted points. Propagates CapacityError when the batch cannot
/// cover m*n effective samples.
std::vector<TestStatistic> build_teststatistic_user(
    const Target& target, const std::vector<MetricRequest>& metrics,
    const SampleBatch& user, const HarnessOptions& opt);

/// Result of normalizing a value against a reference scale.
struct Normalized {
  double z = 0.0;
  bool degenerate = false;
};

/// (value - ref_mean) / ref_std. A reference std below 1e-300 cannot be
/// divided by meaningfully; the raw difference is returned instead, marked
/// degenerate.
Normalized normalize(double value, double ref_mean, double ref_std);

/// Band classification with closed upper bounds: |z| <= 1 -> "1sigma",
/// <= 2 -> "2sigma", <= 3 -> "3sigma", else ">3sigma".
std::string band_label(double z);

/// Matches reference and user statistics (same metrics, same order) and
/// produces normalized comparisons. Throws ParameterError when the lists
/// do not describe the same metrics.
ComparisonSummary compare(const std::vector<TestStatistic>& ref,
                          const std::vector<TestStatistic>& user);

}  // namespace mcqual
