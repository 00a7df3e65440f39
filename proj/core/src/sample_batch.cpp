#include "mcqual/sample_batch.hpp"

#include <cmath>
#include <utility>

#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"

namespace mcqual {

SampleBatch::SampleBatch(Eigen::MatrixXd points,
                         std::optional<Eigen::VectorXd> weights,
                         std::optional<Eigen::VectorXd> logdensities,
                         std::string source)
    : points_(std::move(points)),
      weights_(std::move(weights)),
      logdensities_(std::move(logdensities)),
      source_(std::move(source)) {
  if (points_.rows() < 1 || points_.cols() < 1) {
    throw ParameterError("SampleBatch: need at least one point and dimension");
  }
  if (!points_.allFinite()) {
    throw ParameterError("SampleBatch: points must be finite");
  }
  if (weights_) {
    if (weights_->size() != points_.rows()) {
      throw ParameterError("SampleBatch: weight count does not match points");
    }
    if (!weights_->allFinite() || (weights_->array() < 0.0).any()) {
      throw ParameterError("SampleBatch: weights must be finite and >= 0");
    }
    if ((weights_->array() == 0.0).all()) {
      throw ParameterError("SampleBatch: weights must not be all zero");
    }
  }
  if (logdensities_ && logdensities_->size() != points_.rows()) {
    throw ParameterError("SampleBatch: logdensity count does not match points");
  }
}

double SampleBatch::total_weight() const {
  return weights_ ? weights_->sum() : static_cast<double>(size());
}

double ess(const SampleBatch& batch) {
  if (!batch.has_weights()) return static_cast<double>(batch.size());
  const double s = batch.weights().sum();
  const double q = batch.weights().squaredNorm();
  return s * s / q;
}

std::vector<SampleBatch> partition(const SampleBatch& batch, std::size_t m,
                                   std::size_t n_eff) {
  if (m < 1 || n_eff < 1) {
    throw ParameterError("partition: m and n_eff must be >= 1");
  }
  const double e = ess(batch);
  const double n_total = static_cast<double>(batch.size());
  const double rho = e / n_total;  // global efficiency
  const auto chunk_len =
      static_cast<std::size_t>(std::ceil(static_cast<double>(n_eff) / rho));
  // ESS < m*n_eff implies m*chunk_len > n, so one row-count check covers
  // both the capacity precondition and ceil overshoot at exact capacity.
  if (chunk_len < 1 ||
      m * chunk_len > static_cast<std::size_t>(batch.size())) {
    throw CapacityError(
        "partition: insufficient effective sample size: required " +
        std::to_string(m * n_eff) + " (m=" + std::to_string(m) +
        " * n_eff=" + std::to_string(n_eff) + "), available ESS " +
        std::to_string(e) + " over " + std::to_string(batch.size()) +
        " rows");
  }
  std::vector<SampleBatch> chunks;
  chunks.reserve(m);
  const auto len = static_cast<Eigen::Index>(chunk_len);
  for (std::size_t i = 0; i < m; ++i) {
    const auto start = static_cast<Eigen::Index>(i) * len;
    std::optional<Eigen::VectorXd> w;
    if (batch.has_weights()) w = batch.weights().segment(start, len);
    std::optional<Eigen::VectorXd> ld;
    if (batch.has_logdensities()) {
      ld = batch.logdensities().segment(start, len);
    }
    chunks.emplace_back(batch.points().middleRows(start, len), std::move(w),
                        std::move(ld),
                        batch.source() + "#" + std::to_string(i));
  }
  return chunks;
}

SampleBatch weighted_resample(const SampleBatch& batch, std::size_t n,
                              std::uint64_t seed) {
  if (n < 1) throw ParameterError("weighted_resample: n must be >= 1");
  const Eigen::Index rows = batch.size();
  const double total = batch.total_weight();
  const double step = total / static_cast<double>(n);

  Rng rng(seed);
  const double u = rng.uniform01();

  Eigen::MatrixXd out(static_cast<Eigen::Index>(n), batch.dimension());
  std::optional<Eigen::VectorXd> out_ld;
  if (batch.has_logdensities()) {
    out_ld = Eigen::VectorXd(static_cast<Eigen::Index>(n));
  }

  // Walk the weight CDF once; selection positions are (u + k) * step.
  Eigen::Index row = 0;
  double cum = batch.weight(0);
  for (std::size_t k = 0; k < n; ++k) {
    const double pos = (u + static_cast<double>(k)) * step;
    while (cum <= pos && row + 1 < rows) {
      ++row;
      cum += batch.weight(row);
    }
    out.row(static_cast<Eigen::Index>(k)) = batch.points().row(row);
    if (out_ld) {
      (*out_ld)[static_cast<Eigen::Index>(k)] = batch.logdensities()[row];
    }
  }
  return SampleBatch(std::move(out), std::nullopt, std::move(out_ld),
                     batch.source());
}

}  // namespace mcqual
