#include "mcqual/metrics_basic.hpp"

#include <algorithm>
#include <cmath>

#include "mcqual/errors.hpp"

namespace mcqual {

namespace {

Eigen::VectorXd weighted_column_means(const SampleBatch& batch) {
  if (batch.has_weights()) {
    return batch.points().transpose() * batch.weights() /
           batch.total_weight();
  }
  return batch.points().colwise().mean();
}

}  // namespace

std::vector<MetricValue> marginal_mean(const SampleBatch& batch) {
  const Eigen::VectorXd m = weighted_column_means(batch);
  std::vector<MetricValue> out;
  out.reserve(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < m.size(); ++i) {
    out.push_back({"marginal_mean", i, m[i]});
  }
  return out;
}

std::vector<MetricValue> marginal_variance(const SampleBatch& batch) {
  if (batch.size() < 2) {
    throw DegenerateInputError(
        "marginal_variance: need at least 2 points, got " +
        std::to_string(batch.size()));
  }
  const Eigen::VectorXd m = weighted_column_means(batch);
  const Eigen::MatrixXd centered =
      batch.points().rowwise() - m.transpose();
  Eigen::VectorXd v;
  if (batch.has_weights()) {
    v = centered.array().square().matrix().transpose() * batch.weights() /
        batch.total_weight();
  } else {
    v = centered.array().square().colwise().mean();
  }
  std::vector<MetricValue> out;
  out.reserve(static_cast<std::size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) {
    out.push_back({"marginal_variance", i, v[i]});
  }
  return out;
}

std::vector<MetricValue> chi_square_marginal(const SampleBatch& batch,
                                             const Target& target,
                                             int bins) {
  if (bins < 1) throw ParameterError("chi_square_marginal: bins must be >= 1");
  if (batch.dimension() != target.dimension()) {
    throw ParameterError("chi_square_marginal: batch dimension " +
                         std::to_string(batch.dimension()) +
                         " does not match target dimension " +
                         std::to_string(target.dimension()));
  }

  const double e = ess(batch);
  const double expected = e / bins;
  const double rescale = e / batch.total_weight();

  std::vector<MetricValue> out;
  out.reserve(static_cast<std::size_t>(batch.dimension()));
  std::vector<double> edges(static_cast<std::size_t>(bins) - 1);
  std::vector<double> observed(static_cast<std::size_t>(bins));

  for (int dim = 0; dim < batch.dimension(); ++dim) {
    // Equal-probability bins of the analytic marginal.
    for (int j = 1; j < bins; ++j) {
      edges[static_cast<std::size_t>(j) - 1] =
          target.marginal_quantile(dim, static_cast<double>(j) / bins);
    }
    std::fill(observed.begin(), observed.end(), 0.0);
    for (Eigen::Index i = 0; i < batch.size(); ++i) {
      const double x = batch.points()(i, dim);
      const auto it = std::upper_bound(edges.begin(), edges.end(), x);
      observed[static_cast<std::size_t>(it - edges.begin())] +=
          batch.weight(i);
    }
    double stat = 0.0;
    for (double o : observed) {
      const double diff = o * rescale - expected;
      stat += diff * diff / expected;
    }
    out.push_back({"chi_square", dim, stat});
  }
  return out;
}

}  // namespace mcqual
