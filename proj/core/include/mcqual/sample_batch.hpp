#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace mcqual {

// Immutable set of n d-dimensional points with optional per-point weights
// (absent means all 1) and optional per-point log-density values. Row i of
// points() is point i; row order is meaningful because correlated samplers
// rely on it for autocorrelation-aware partitioning.
class SampleBatch {
 public:
  SampleBatch(Eigen::MatrixXd points,
              std::optional<Eigen::VectorXd> weights = std::nullopt,
              std::optional<Eigen::VectorXd> logdensities = std::nullopt,
              std::string source = "");

  Eigen::Index size() const { return points_.rows(); }
  Eigen::Index dimension() const { return points_.cols(); }
  const Eigen::MatrixXd& points() const { return points_; }

  bool has_weights() const { return weights_.has_value(); }
  // Valid only when has_weights(); use weight(i) for the uniform default.
  const Eigen::VectorXd& weights() const { return *weights_; }
  double weight(Eigen::Index i) const {
    return weights_ ? (*weights_)[i] : 1.0;
  }
  double total_weight() const;

  bool has_logdensities() const { return logdensities_.has_value(); }
  const Eigen::VectorXd& logdensities() const { return *logdensities_; }

  const std::string& source() const { return source_; }

 private:
  Eigen::MatrixXd points_;
  std::optional<Eigen::VectorXd> weights_;
  std::optional<Eigen::VectorXd> logdensities_;
  std::string source_;
};

// Effective sample size (sum w)^2 / sum(w^2); equals n for equal weights.
double ess(const SampleBatch& batch);

// Split into m contiguous chunks, each carrying an effective sample size of
// n_eff. Chunk length is ceil(n_eff / rho) rows where rho = ess/n is the
// batch's global efficiency; surplus tail rows are dropped. Throws
// CapacityError when the batch cannot cover m * n_eff effective samples.
std::vector<SampleBatch> partition(const SampleBatch& batch, std::size_t m,
                                   std::size_t n_eff);

// Systematic resampling proportional to weights: n unweighted points drawn
// at CDF positions (u + k)/n, k = 0..n-1, with a single uniform u from seed.
// Equal-weight input with n == size() reproduces the input rows unchanged.
SampleBatch weighted_resample(const SampleBatch& batch, std::size_t n,
                              std::uint64_t seed);

}  // namespace mcqual
