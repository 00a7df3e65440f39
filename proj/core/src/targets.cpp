#include "mcqual/targets.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <utility>

#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"

namespace mcqual {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;  // ln(2*pi)

double log_normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return -0.5 * z * z - std::log(sd) - 0.5 * kLog2Pi;
}

double logsumexp(const std::vector<double>& v) {
  double hi = -kInf;
  for (double x : v) hi = std::max(hi, x);
  if (hi == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - hi);
  return hi + std::log(s);
}

// Fill a fresh points matrix with standard normals, point-major order.
void fill_standard_normal(Eigen::MatrixXd& points, Rng& rng) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    for (Eigen::Index j = 0; j < points.cols(); ++j) {
      points(i, j) = rng.normal();
    }
  }
}

}  // namespace

Eigen::MatrixXd build_covariance(int k, double r) {
  if (k < 1) throw ParameterError("build_covariance: k must be >= 1");
  if (k > 1) {
    const double lo = -1.0 / (k - 1);
    // Outside (lo, 1) the smallest eigenvalue (1-r or 1-r+rk) is <= 0.
    if (!(r > lo && r < 1.0)) {
      throw ParameterError(
          "build_covariance: correlation " + std::to_string(r) +
          " outside the positive-definite range (" + std::to_string(lo) +
          ", 1) for k=" + std::to_string(k));
    }
  }
  Eigen::MatrixXd m = Eigen::MatrixXd::Constant(k, k, r);
  m.diagonal().setOnes();
  return m;
}

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z * std::numbers::sqrt2 / 2.0);
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ParameterError("normal_quantile: p must lie in (0, 1)");
  }
  // Acklam's rational approximation, then one Halley step against erfc-based
  // normal_cdf to reach full double precision.
  static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                 -2.759285104469687e+02, 1.383577518672690e+02,
                                 -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                 -1.556989798598866e+02, 6.680131188771972e+01,
                                 -1.328068155288572e+01};
  static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                 -2.400758277161838e+00, -2.549732539343734e+00,
                                 4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                 2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double x;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - p_low) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) *
        q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  const double e = normal_cdf(x) - p;
  const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(x * x / 2.0);
  return x - u / (1.0 + x * u / 2.0);
}

Target::Target(std::string name, TargetKind kind, int dimension,
               std::vector<Interval> bounds, std::string description)
    : name_(std::move(name)),
      kind_(kind),
      dimension_(dimension),
      bounds_(std::move(bounds)),
      description_(std::move(description)) {
  if (dimension_ < 1) throw ParameterError("Target: dimension must be >= 1");
  if (bounds_.size() != static_cast<std::size_t>(dimension_)) {
    throw ParameterError("Target: bounds count does not match dimension");
  }
  for (const Interval& b : bounds_) {
    if (!(b.lo < b.hi)) throw ParameterError("Target: empty bounds interval");
  }
}

void Target::check_point(const Eigen::VectorXd& point) const {
  if (point.size() != dimension_) {
    throw ParameterError("point dimension " + std::to_string(point.size()) +
                         " does not match target dimension " +
                         std::to_string(dimension_) + " (" + name_ + ")");
  }
}

void Target::check_dim(int dim) const {
  if (dim < 0 || dim >= dimension_) {
    throw ParameterError("dimension index " + std::to_string(dim) +
                         " out of range for " + name_);
  }
}

namespace {

std::vector<Interval> repeat_bounds(Interval b, int k) {
  return std::vector<Interval>(static_cast<std::size_t>(k), b);
}

class Normal1dTarget final : public Target {
 public:
  Normal1dTarget(std::string name, double mean, double stddev, Interval bounds)
      : Target(std::move(name), TargetKind::normal_1d, 1, {bounds},
               "normal, mean " + std::to_string(mean)),
        mean_(mean),
        sd_(stddev) {
    if (!(sd_ > 0)) throw ParameterError("normal-1d: stddev must be > 0");
  }

  double log_density(const Eigen::VectorXd& point) const override {
    check_point(point);
    return log_normal_pdf(point[0], mean_, sd_);
  }

  SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const override {
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      pts(i, 0) = mean_ + sd_ * rng.normal();
    }
    return SampleBatch(std::move(pts), std::nullopt, std::nullopt,
                       "iid:" + name());
  }

  double marginal_cdf(int dim, double x) const override {
    check_dim(dim);
    return normal_cdf((x - mean_) / sd_);
  }

  double marginal_quantile(int dim, double p) const override {
    check_dim(dim);
    return mean_ + sd_ * normal_quantile(p);
  }

 private:
  double mean_;
  double sd_;
};

class GaussianTarget final : public Target {
 public:
  GaussianTarget(std::string name, Eigen::VectorXd mean, double r,
                 Interval bounds)
      : Target(std::move(name),
               r == 0.0 ? TargetKind::normal_kd
                        : TargetKind::correlated_normal_kd,
               static_cast<int>(mean.size()),
               repeat_bounds(bounds, static_cast<int>(mean.size())),
               r == 0.0 ? "normal, identity covariance"
                        : "normal, equicorrelation r=" + std::to_string(r)),
        mean_(std::move(mean)),
        identity_(r == 0.0) {
    const Eigen::MatrixXd cov = build_covariance(dimension(), r);
    // PD gate beyond the parameter-range check: reject numerically
    // near-singular covariances before factorizing.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-10) {
      throw ParameterError(name_or("gaussian") +
                           ": covariance not positive definite");
    }
    chol_ = cov.llt().matrixL();
    log_det_half_ = chol_.diagonal().array().log().sum();
  }

  double log_density(const Eigen::VectorXd& point) const override {
    check_point(point);
    const Eigen::VectorXd z =
        identity_ ? Eigen::VectorXd(point - mean_)
                  : Eigen::VectorXd(chol_.triangularView<Eigen::Lower>().solve(
                        point - mean_));
    return -0.5 * z.squaredNorm() - log_det_half_ -
           0.5 * dimension() * kLog2Pi;
  }

  SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const override {
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), dimension());
    fill_standard_normal(pts, rng);
    if (!identity_) {
      pts = pts * chol_.transpose();  // row-wise x -> L x
    }
    pts.rowwise() += mean_.transpose();
    return SampleBatch(std::move(pts), std::nullopt, std::nullopt,
                       "iid:" + name());
  }

  double marginal_cdf(int dim, double x) const override {
    check_dim(dim);
    // Equicorrelation keeps every diagonal entry at 1, so each marginal is
    // N(mean_i, 1).
    return normal_cdf(x - mean_[dim]);
  }

  double marginal_quantile(int dim, double p) const override {
    check_dim(dim);
    return mean_[dim] + normal_quantile(p);
  }

 private:
  std::string name_or(const char* fallback) const {
    return name().empty() ? fallback : name();
  }

  Eigen::VectorXd mean_;
  bool identity_;
  Eigen::MatrixXd chol_;
  double log_det_half_ = 0.0;
};

class MixtureTarget final : public Target {
 public:
  MixtureTarget(std::string name, std::vector<double> weights,
                std::vector<Eigen::VectorXd> means, double r, Interval bounds)
      : Target(std::move(name), TargetKind::mixture_normal_kd,
               means.empty() ? 0 : static_cast<int>(means[0].size()),
               repeat_bounds(bounds,
                             means.empty() ? 0
                                           : static_cast<int>(means[0].size())),
               "normal mixture, " + std::to_string(weights.size()) +
                   " components, r=" + std::to_string(r)),
        weights_(std::move(weights)),
        means_(std::move(means)),
        identity_(r == 0.0) {
    if (weights_.empty() || weights_.size() != means_.size()) {
      throw ParameterError("mixture: need matching weights and means");
    }
    double sum = 0.0;
    for (double w : weights_) {
      if (w < 0) throw ParameterError("mixture: weights must be >= 0");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-12) {
      throw ParameterError("mixture: weights must sum to 1");
    }
    for (const Eigen::VectorXd& m : means_) {
      if (m.size() != dimension()) {
        throw ParameterError("mixture: component means differ in dimension");
      }
    }
    const Eigen::MatrixXd cov = build_covariance(dimension(), r);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(
        cov, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() <= 1e-10) {
      throw ParameterError("mixture: covariance not positive definite");
    }
    chol_ = cov.llt().matrixL();
    log_det_half_ = chol_.diagonal().array().log().sum();
  }

  double log_density(const Eigen::VectorXd& point) const override {
    check_point(point);
    std::vector<double> terms;
    terms.reserve(weights_.size());
    for (std::size_t c = 0; c < weights_.size(); ++c) {
      if (weights_[c] == 0.0) continue;
      const Eigen::VectorXd z =
          identity_
              ? Eigen::VectorXd(point - means_[c])
              : Eigen::VectorXd(chol_.triangularView<Eigen::Lower>().solve(
                    point - means_[c]));
      terms.push_back(std::log(weights_[c]) - 0.5 * z.squaredNorm() -
                      log_det_half_ - 0.5 * dimension() * kLog2Pi);
    }
    return logsumexp(terms);
  }

  SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const override {
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), dimension());
    Eigen::VectorXd z(dimension());
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      const std::size_t c = pick_component(rng);
      for (Eigen::Index j = 0; j < z.size(); ++j) z[j] = rng.normal();
      if (identity_) {
        pts.row(i) = (means_[c] + z).transpose();
      } else {
        pts.row(i) =
            (means_[c] + chol_.triangularView<Eigen::Lower>() * z).transpose();
      }
    }
    return SampleBatch(std::move(pts), std::nullopt, std::nullopt,
                       "iid:" + name());
  }

  double marginal_cdf(int dim, double x) const override {
    check_dim(dim);
    double s = 0.0;
    for (std::size_t c = 0; c < weights_.size(); ++c) {
      s += weights_[c] * normal_cdf(x - means_[c][dim]);  // marginal sd is 1
    }
    return s;
  }

  double marginal_quantile(int dim, double p) const override {
    check_dim(dim);
    if (!(p > 0.0 && p < 1.0)) {
      throw ParameterError("marginal_quantile: p must lie in (0, 1)");
    }
    // No closed form for a mixture marginal; bisect the CDF. Component
    // marginals have sd 1, so +-40 around the extreme means brackets any
    // p representable in double precision.
    double lo = means_[0][dim];
    double hi = lo;
    for (const Eigen::VectorXd& m : means_) {
      lo = std::min(lo, m[dim]);
      hi = std::max(hi, m[dim]);
    }
    lo -= 40.0;
    hi += 40.0;
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      (marginal_cdf(dim, mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

 private:
  std::size_t pick_component(Rng& rng) const {
    const double u = rng.uniform01();
    double cum = 0.0;
    for (std::size_t c = 0; c + 1 < weights_.size(); ++c) {
      cum += weights_[c];
      if (u < cum) return c;
    }
    return weights_.size() - 1;
  }

  std::vector<double> weights_;
  std::vector<Eigen::VectorXd> means_;
  bool identity_;
  Eigen::MatrixXd chol_;
  double log_det_half_ = 0.0;
};

class Cauchy1dTarget final : public Target {
 public:
  Cauchy1dTarget(std::string name, double location, double scale,
                 Interval bounds)
      : Target(std::move(name), TargetKind::cauchy_1d, 1, {bounds},
               "Cauchy, heavy-tailed"),
        x0_(location),
        gamma_(scale) {
    if (!(gamma_ > 0)) throw ParameterError("cauchy-1d: scale must be > 0");
  }

  double log_density(const Eigen::VectorXd& point) const override {
    check_point(point);
    const double z = (point[0] - x0_) / gamma_;
    return -std::log(std::numbers::pi * gamma_) - std::log1p(z * z);
  }

  SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const override {
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), 1);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      pts(i, 0) = rng.cauchy(x0_, gamma_);
    }
    return SampleBatch(std::move(pts), std::nullopt, std::nullopt,
                       "iid:" + name());
  }

  double marginal_cdf(int dim, double x) const override {
    check_dim(dim);
    return 0.5 + std::atan((x - x0_) / gamma_) / std::numbers::pi;
  }

  double marginal_quantile(int dim, double p) const override {
    check_dim(dim);
    if (!(p > 0.0 && p < 1.0)) {
      throw ParameterError("marginal_quantile: p must lie in (0, 1)");
    }
    return x0_ + gamma_ * std::tan(std::numbers::pi * (p - 0.5));
  }

 private:
  double x0_;
  double gamma_;
};

class EightSchoolsTarget final : public Target {
 public:
  EightSchoolsTarget(std::string name, Eigen::VectorXd y, Eigen::VectorXd sigma,
                     std::uint64_t max_attempts)
      : Target(std::move(name), TargetKind::eight_schools, 10,
               make_bounds(), "hierarchical posterior (mu, tau, theta_1..8)"),
        y_(std::move(y)),
        sigma_(std::move(sigma)),
        max_attempts_(max_attempts) {
    if (y_.size() != 8 || sigma_.size() != 8) {
      throw ParameterError("eight-schools: y and sigma must have length 8");
    }
    if ((sigma_.array() <= 0.0).any()) {
      throw ParameterError("eight-schools: sigma entries must be > 0");
    }
  }

  double log_density(const Eigen::VectorXd& point) const override {
    check_point(point);
    const double mu = point[0];
    const double tau = point[1];
    if (tau <= 0.0) return -kInf;
    // Unnormalized posterior: prior(mu, tau, theta) * likelihood(y | theta).
    double lp = log_normal_pdf(mu, 0.0, 5.0);
    lp += std::log(2.0 / (std::numbers::pi * 5.0)) -
          std::log1p((tau / 5.0) * (tau / 5.0));  // half-Cauchy(0, 5)
    for (int i = 0; i < 8; ++i) {
      const double theta = point[2 + i];
      lp += log_normal_pdf(theta, mu, tau);
      lp += log_normal_pdf(y_[i], theta, sigma_[i]);
    }
    return lp;
  }

  SampleBatch sample_iid(std::size_t n, std::uint64_t seed) const override {
    Rng rng(seed);
    Eigen::MatrixXd pts(static_cast<Eigen::Index>(n), 10);
    std::uint64_t attempts = 0;
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
      for (;;) {
        if (++attempts > max_attempts_) {
          throw ProgressError(
              "eight-schools accept-reject exceeded " +
              std::to_string(max_attempts_) + " attempts for a batch of " +
              std::to_string(n));
        }
        const double mu = 5.0 * rng.normal();
        const double tau = std::abs(rng.cauchy(0.0, 5.0));
        double log_ratio = 0.0;  // log L(theta) - log L_max
        pts(i, 0) = mu;
        pts(i, 1) = tau;
        for (int s = 0; s < 8; ++s) {
          const double theta = mu + tau * rng.normal();
          pts(i, 2 + s) = theta;
          const double d = (y_[s] - theta) / sigma_[s];
          log_ratio -= 0.5 * d * d;
        }
        const double u = 1.0 - rng.uniform01();  // (0, 1]
        if (std::log(u) < log_ratio) break;
      }
    }
    return SampleBatch(std::move(pts), std::nullopt, std::nullopt,
                       "iid:" + name());
  }

  bool has_marginal_cdf() const override { return false; }

  double marginal_cdf(int, double) const override {
    throw UnsupportedMetricError(
        "eight-schools has no analytic marginal CDF");
  }

  double marginal_quantile(int, double) const override {
    throw UnsupportedMetricError(
        "eight-schools has no analytic marginal quantiles");
  }

 private:
  static std::vector<Interval> make_bounds() {
    std::vector<Interval> b;
    b.push_back({-20.0, 20.0});  // mu
    b.push_back({0.0, 30.0});    // tau
    for (int i = 0; i < 8; ++i) b.push_back({-50.0, 50.0});
    return b;
  }

  Eigen::VectorXd y_;
  Eigen::VectorXd sigma_;
  std::uint64_t max_attempts_;
};

}  // namespace

TargetPtr make_normal_1d(std::string name, double mean, double stddev,
                         Interval bounds) {
  return std::make_shared<Normal1dTarget>(std::move(name), mean, stddev,
                                          bounds);
}

TargetPtr make_gaussian(std::string name, Eigen::VectorXd mean, double r,
                        Interval bounds) {
  return std::make_shared<GaussianTarget>(std::move(name), std::move(mean), r,
                                          bounds);
}

TargetPtr make_mixture(std::string name, std::vector<double> weights,
                       std::vector<Eigen::VectorXd> means, double r,
                       Interval bounds) {
  return std::make_shared<MixtureTarget>(std::move(name), std::move(weights),
                                         std::move(means), r, bounds);
}

TargetPtr make_cauchy_1d(std::string name, double location, double scale,
                         Interval bounds) {
  return std::make_shared<Cauchy1dTarget>(std::move(name), location, scale,
                                          bounds);
}

TargetPtr make_eight_schools(std::string name, Eigen::VectorXd y,
                             Eigen::VectorXd sigma,
                             std::uint64_t max_attempts) {
  return std::make_shared<EightSchoolsTarget>(std::move(name), std::move(y),
                                              std::move(sigma), max_attempts);
}

}  // namespace mcqual
