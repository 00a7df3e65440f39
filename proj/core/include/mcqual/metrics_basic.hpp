#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcqual/sample_batch.hpp"
#include "mcqual/targets.hpp"

namespace mcqual {

/// One scalar metric evaluation, optionally tied to a coordinate.
struct MetricValue {
  std::string name;              ///< base metric name, e.g. "marginal_mean"
  std::optional<int> component;  ///< zero-based coordinate index, if any
  double value = 0.0;

  /// Serialized form: "marginal_mean[0]" when a component is present,
  /// otherwise just the base name.
  std::string label() const {
    return component ? name + "[" + std::to_string(*component) + "]" : name;
  }
};

/// Weighted mean per coordinate: sum(w_i x_i) / sum(w_i). One entry per
/// dimension, named "marginal_mean[i]".
std::vector<MetricValue> marginal_mean(const SampleBatch& batch);

/// Weighted population variance per coordinate:
/// sum(w_i (x_i - mean)^2) / sum(w_i). Throws DegenerateInputError for a
/// single-point batch. Named "marginal_variance[i]".
std::vector<MetricValue> marginal_variance(const SampleBatch& batch);

/// Pearson chi-square statistic per coordinate against the target's analytic
/// marginal, over `bins` equal-probability bins (edges are marginal
/// quantiles). Observed bin masses are rescaled so they sum to ess(batch),
/// and the expected mass per bin is ess(batch)/bins; autocorrelated or
/// weighted input is therefore judged at its effective, not nominal, size.
/// Named "chi_square[i]".
///
/// Throws ParameterError for bins < 1 or a batch/target dimension mismatch;
/// targets without an analytic marginal CDF raise UnsupportedMetricError.
std::vector<MetricValue> chi_square_marginal(const SampleBatch& batch,
                                             const Target& target,
                                             int bins);

}  // namespace mcqual
