#include "mcqual/mmd.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"

namespace mcqual {

namespace {

constexpr Eigen::Index kTile = 256;

void check_sigma(double sigma) {
  if (!(sigma > 0)) {
    throw ParameterError("gaussian kernel bandwidth must be > 0");
  }
}

void check_mmd_inputs(const SampleBatch& x, const SampleBatch& y) {
  if (x.has_weights() || y.has_weights()) {
    throw ParameterError(
        "mmd: weighted input; resample to unweighted points first");
  }
  if (x.dimension() != y.dimension()) {
    throw ParameterError("mmd: dimensions differ (" +
                         std::to_string(x.dimension()) + " vs " +
                         std::to_string(y.dimension()) + ")");
  }
}

// Sum of exp(-d2/(2 sigma^2)) over all (row of a) x (row of b) pairs,
// accumulated tile by tile in a fixed order so the result is reproducible.
double kernel_sum(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                  double sigma) {
  const double inv = 1.0 / (2.0 * sigma * sigma);
  const Eigen::VectorXd a2 = a.rowwise().squaredNorm();
  const Eigen::VectorXd b2 = b.rowwise().squaredNorm();
  double total = 0.0;
  for (Eigen::Index i0 = 0; i0 < a.rows(); i0 += kTile) {
    const Eigen::Index ni = std::min(kTile, a.rows() - i0);
    for (Eigen::Index j0 = 0; j0 < b.rows(); j0 += kTile) {
      const Eigen::Index nj = std::min(kTile, b.rows() - j0);
      Eigen::MatrixXd d2 =
          (-2.0 * a.middleRows(i0, ni) * b.middleRows(j0, nj).transpose());
      d2.colwise() += a2.segment(i0, ni);
      d2.rowwise() += b2.segment(j0, nj).transpose();
      // ||a||^2 + ||b||^2 - 2 a.b can cancel slightly below 0.
      total += (d2.array().max(0.0) * -inv).exp().sum();
    }
  }
  return total;
}

// Deterministic ordering of the two inputs: fewer rows first, ties broken
// by the first differing coordinate. Identical data compares equal and the
// order is then irrelevant.
bool comes_first(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) return a.rows() < b.rows();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (a(i, j) != b(i, j)) return a(i, j) < b(i, j);
    }
  }
  return true;
}

// sqrt(2/D) * cos(Omega x + b) feature means, one batch at a time, in
// kTile-row blocks.
Eigen::VectorXd feature_mean(const Eigen::MatrixXd& pts,
                             const Eigen::MatrixXd& omega,
                             const Eigen::RowVectorXd& offsets) {
  Eigen::VectorXd sums = Eigen::VectorXd::Zero(omega.rows());
  for (Eigen::Index i0 = 0; i0 < pts.rows(); i0 += kTile) {
    const Eigen::Index ni = std::min(kTile, pts.rows() - i0);
    Eigen::MatrixXd phase = pts.middleRows(i0, ni) * omega.transpose();
    phase.rowwise() += offsets;
    sums += phase.array().cos().matrix().colwise().sum().transpose();
  }
  const double scale = std::sqrt(2.0 / static_cast<double>(omega.rows()));
  return sums * (scale / static_cast<double>(pts.rows()));
}

}  // namespace

double gaussian_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& y,
                       double sigma) {
  check_sigma(sigma);
  if (x.size() != y.size()) {
    throw ParameterError("gaussian_kernel: dimensions differ");
  }
  return std::exp(-(x - y).squaredNorm() / (2.0 * sigma * sigma));
}

double median_heuristic(const SampleBatch& x, const SampleBatch& y,
                        int cap) {
  if (cap < 1) throw ParameterError("median_heuristic: cap must be >= 1");
  if (x.dimension() != y.dimension()) {
    throw ParameterError("median_heuristic: dimensions differ");
  }
  Eigen::MatrixXd pool(x.size() + y.size(), x.dimension());
  pool.topRows(x.size()) = x.points();
  pool.bottomRows(y.size()) = y.points();

  if (pool.rows() > cap) {
    // Partial Fisher-Yates with a fixed internal seed: the bandwidth is a
    // function of the pooled data alone, not of any caller-provided seed.
    Rng rng(0x9e3779b97f4a7c15ULL);
    std::vector<Eigen::Index> idx(static_cast<std::size_t>(pool.rows()));
    for (std::size_t i = 0; i < idx.size(); ++i) {
      idx[i] = static_cast<Eigen::Index>(i);
    }
    for (int i = 0; i < cap; ++i) {
      const std::size_t j =
          static_cast<std::size_t>(i) +
          static_cast<std::size_t>(rng.below(idx.size() - i));
      std::swap(idx[static_cast<std::size_t>(i)], idx[j]);
    }
    Eigen::MatrixXd sub(cap, pool.cols());
    for (int i = 0; i < cap; ++i) {
      sub.row(i) = pool.row(idx[static_cast<std::size_t>(i)]);
    }
    pool = std::move(sub);
  }

  const Eigen::Index s = pool.rows();
  if (s < 2) {
    throw DegenerateInputError(
        "median_heuristic: need at least 2 pooled points");
  }
  std::vector<double> dists;
  dists.reserve(static_cast<std::size_t>(s) * (s - 1) / 2);
  for (Eigen::Index i = 0; i < s; ++i) {
    for (Eigen::Index j = i + 1; j < s; ++j) {
      dists.push_back((pool.row(i) - pool.row(j)).norm());
    }
  }
  const std::size_t k = dists.size();
  const std::size_t mid = k / 2;
  std::nth_element(dists.begin(), dists.begin() + static_cast<long>(mid),
                   dists.end());
  double med = dists[mid];
  if (k % 2 == 0) {
    const double lower =
        *std::max_element(dists.begin(), dists.begin() + static_cast<long>(mid));
    med = 0.5 * (lower + med);
  }
  if (!(med > 0)) {
    throw DegenerateInputError(
        "median_heuristic: median pairwise distance is 0; bandwidth is "
        "undefined for (near-)constant pooled data");
  }
  return med;
}

double mmd_exact(const SampleBatch& x, const SampleBatch& y, double sigma) {
  check_sigma(sigma);
  check_mmd_inputs(x, y);
  // Canonical order makes the cross-term accumulation identical for
  // (x, y) and (y, x), so the distance is exactly symmetric.
  const bool x_first = comes_first(x.points(), y.points());
  const Eigen::MatrixXd& a = x_first ? x.points() : y.points();
  const Eigen::MatrixXd& b = x_first ? y.points() : x.points();
  const double na = static_cast<double>(a.rows());
  const double nb = static_cast<double>(b.rows());
  const double mmd2 = kernel_sum(a, a, sigma) / (na * na) +
                      kernel_sum(b, b, sigma) / (nb * nb) -
                      2.0 * kernel_sum(a, b, sigma) / (na * nb);
  return std::sqrt(std::max(mmd2, 0.0));
}

double mmd_rff(const SampleBatch& x, const SampleBatch& y, double sigma,
               int D, std::uint64_t seed) {
  check_sigma(sigma);
  check_mmd_inputs(x, y);
  if (D < 1) throw ParameterError("mmd_rff: D must be >= 1");

  const Eigen::Index d = x.dimension();
  Eigen::MatrixXd omega(D, d);
  Eigen::RowVectorXd offsets(D);
  Rng rng(derive_seed(seed, 0, "rff"));
  for (Eigen::Index i = 0; i < omega.rows(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      omega(i, j) = rng.normal() / sigma;
    }
  }
  for (int i = 0; i < D; ++i) {
    offsets[i] = rng.uniform(0.0, 2.0 * std::numbers::pi);
  }

  const Eigen::VectorXd mu_x = feature_mean(x.points(), omega, offsets);
  const Eigen::VectorXd mu_y = feature_mean(y.points(), omega, offsets);
  return (mu_x - mu_y).norm();
}

}  // namespace mcqual
