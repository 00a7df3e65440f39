#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "mcqual/sample_batch.hpp"

namespace mcqual {

// Per-dimension plotting/initialization interval. Densities are never
// truncated to it; samplers only use it to seed chains and scale plots.
struct Interval {
  double lo;
  double hi;
};

// Equicorrelation covariance r*J + (1-r)*I: ones on the diagonal, r off it.
// Positive definite iff r in (-1/(k-1), 1); throws ParameterError outside.
Eigen::MatrixXd build_covariance(int k, double r);

// Standard normal CDF and its inverse, accurate to ~1e-15 relative error.
double normal_cdf(double z);
double normal_quantile(double p);

enum class TargetKind {
  normal_1d,
  normal_kd,
  correlated_normal_kd,
  mixture_normal_kd,
  cauchy_1d,
  eight_schools,
};

// An IID-sampleable test distribution with a known (possibly unnormalized)
// log-density and, where analytic, per-dimension marginal CDFs/quantiles.
// Immutable after construction; safe to share across threads.
class Target {
 public:
  virtual ~Target() = default;

  const std::string& name() const { return name_; }
  TargetKind kind() const { return kind_; }
  int dimension() const { return dimension_; }
  const std::vector<Interval>& bounds() const { return bounds_; }
  // One-line description shown by the CLI catalog listing.
  const std::string& description() const { return description_; }

  // Natural log of the density (prior x likelihood for the hierarchical
  // case); -inf where the density is 0. Throws ParameterError on a
  // dimension mismatch.
  virtual double log_density(const Eigen::VectorXd& point) const = 0;

  // n IID points, unweighted, reproducible from seed alone.
  virtual SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const = 0;

  // Marginal CDF/quantile of coordinate `dim`. Targets without analytic
  // marginals throw UnsupportedMetricError.
  virtual bool has_marginal_cdf() const { return true; }
  virtual double marginal_cdf(int dim, double x) const = 0;
  virtual double marginal_quantile(int dim, double p) const = 0;

 protected:
  Target(std::string name, TargetKind kind, int dimension,
         std::vector<Interval> bounds, std::string description);
  void check_point(const Eigen::VectorXd& point) const;
  void check_dim(int dim) const;

 private:
  std::string name_;
  TargetKind kind_;
  int dimension_;
  std::vector<Interval> bounds_;
  std::string description_;
};

using TargetPtr = std::shared_ptr<const Target>;

TargetPtr make_normal_1d(std::string name, double mean, double stddev,
                         Interval bounds);

// k-dimensional Gaussian with equicorrelation covariance build_covariance(k,
// r); r = 0 gives the uncorrelated catalog entries. The Cholesky factor is
// computed once here and cached for sampling and density evaluation.
TargetPtr make_gaussian(std::string name, Eigen::VectorXd mean, double r,
                        Interval bounds);

// Mixture of Gaussians sharing one equicorrelation parameter r. Weights must
// be nonnegative and sum to 1 (tolerance 1e-12); means must share dimension.
TargetPtr make_mixture(std::string name, std::vector<double> weights,
                       std::vector<Eigen::VectorXd> means, double r,
                       Interval bounds);

TargetPtr make_cauchy_1d(std::string name, double location, double scale,
                         Interval bounds);

// Hierarchical meta-analysis posterior over (mu, tau, theta_1..theta_8):
// mu ~ N(0, 5^2), tau ~ half-Cauchy(0, 5), theta_i ~ N(mu, tau^2), with
// likelihood prod_i N(y_i | theta_i, sigma_i^2). IID sampling is
// accept-reject from the prior with acceptance L/L_max; `max_attempts`
// bounds the total tries per requested batch (ProgressError beyond it).
TargetPtr make_eight_schools(std::string name, Eigen::VectorXd y,
                             Eigen::VectorXd sigma,
                             std::uint64_t max_attempts = 100000000ULL);

}  // namespace mcqual
