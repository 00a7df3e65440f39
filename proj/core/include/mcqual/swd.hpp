#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "mcqual/sample_batch.hpp"

namespace mcqual {

/// Sliced Wasserstein configuration: number of random projection
/// directions, distance order, and the seed the direction set is derived
/// from. Two calls with the same seed see the same directions.
struct SwdConfig {
  int L = 50;        ///< projection directions
  double p = 1.0;    ///< distance order, >= 1
  std::uint64_t seed = 0;
};

/// Exact 1D p-Wasserstein distance between two equal-length point sets:
/// sort both, then ((1/N) sum |a_(j) - b_(j)|^p)^(1/p). Arguments are taken
/// by value because they are sorted in place. Throws ParameterError for
/// unequal lengths, empty input, or p < 1.
double wasserstein_1d(std::vector<double> xs, std::vector<double> ys,
                      double p);

/// Uniform draw from the unit sphere in R^d (normalized standard-Gaussian
/// vector; an exactly-zero draw is re-sampled). Deterministic given seed.
Eigen::VectorXd sample_unit_sphere(int d, std::uint64_t seed);

/// The exact direction list sliced_wasserstein(cfg) projects onto, in
/// evaluation order. Exposed so callers can reproduce per-direction
/// distances against the identical directions.
std::vector<Eigen::VectorXd> swd_directions(int d, const SwdConfig& cfg);

/// Monte Carlo sliced Wasserstein distance: project both sets onto each of
/// cfg.L shared random directions, take the exact 1D distance per
/// direction, and aggregate as ((1/L) sum W_i^p)^(1/p).
///
/// Both batches must be unweighted (resample weighted input first) and have
/// equal size and dimension; violations throw ParameterError. With the same
/// cfg the result is symmetric in its arguments and exactly zero for X = X.
/// One-dimensional input reduces exactly to wasserstein_1d: a projection
/// onto the 0-sphere only flips signs, which the sorted absolute
/// differences cannot see.
double sliced_wasserstein(const SampleBatch& x, const SampleBatch& y,
                          const SwdConfig& cfg);

}  // namespace mcqual
