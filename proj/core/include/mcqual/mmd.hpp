#pragma once

#include <cstdint>

#include <Eigen/Dense>

#include "mcqual/sample_batch.hpp"

namespace mcqual {

/// Gaussian kernel k(x, y) = exp(-||x - y||^2 / (2 sigma^2)). Value in
/// (0, 1], exactly 1 for x = y. Throws ParameterError for sigma <= 0 or a
/// dimension mismatch.
double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       double sigma);

/// Median pairwise Euclidean distance of the pooled point set X union Y.
/// When the pool exceeds `cap` points it is first subsampled without
/// replacement to `cap` points (deterministically; the subsample does not
/// depend on caller seeds, so a given pool always yields the same
/// bandwidth). Throws DegenerateInputError when the median distance is 0,
/// i.e. more than half of all pairs coincide.
double median_heuristic(const SampleBatch& x, const SampleBatch& y,
                        int cap = 1000);

/// Exact Gaussian-kernel MMD between two unweighted batches:
/// sqrt of (1/n^2) sum K_XX + (1/m^2) sum K_YY - (2/nm) sum K_XY, with all
/// n^2 / m^2 terms (diagonals included) so the value is analytically
/// nonnegative; floating-point residue below 0 is clamped before the root.
/// The two inputs are ordered canonically before evaluation, making the
/// result bit-for-bit symmetric. Sizes may differ; dimensions must match
/// and weighted input is rejected (resample first), both via
/// ParameterError.
double mmd_exact(const SampleBatch& x, const SampleBatch& y, double sigma);

/// Random-Fourier-feature approximation of mmd_exact: D frequencies
/// omega_d ~ N(0, sigma^-2 I) and offsets b_d ~ U(0, 2 pi) are drawn from
/// `seed`, the feature map is z(x) = sqrt(2/D) cos(Omega x + b), and the
/// result is the Euclidean distance between the two feature means.
/// Deterministic given seed; same preconditions as mmd_exact, plus D >= 1.
double mmd_rff(const SampleBatch& x, const SampleBatch& y, double sigma,
               int D, std::uint64_t seed);

}  // namespace mcqual
