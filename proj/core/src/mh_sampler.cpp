#include "mcqual/mh_sampler.hpp"

#include <cmath>
#include <limits>

#include "mcqual/errors.hpp"
#include "mcqual/rng.hpp"

namespace mcqual {

namespace {

constexpr int kInitRetries = 1000;

// Uniform draw inside the bounds box with finite log-density, or throw.
Eigen::VectorXd draw_initial(const Target& target, Rng& rng, double& lp_out) {
  const std::vector<Interval>& bounds = target.bounds();
  Eigen::VectorXd x(target.dimension());
  for (int attempt = 0; attempt < kInitRetries; ++attempt) {
    for (int j = 0; j < target.dimension(); ++j) {
      x[j] = rng.uniform(bounds[j].lo, bounds[j].hi);
    }
    const double lp = target.log_density(x);
    if (std::isfinite(lp)) {
      lp_out = lp;
      return x;
    }
  }
  throw ProgressError("metropolis_hastings: no initial point with finite "
                      "log-density on " + target.name() + " after " +
                      std::to_string(kInitRetries) + " draws");
}

}  // namespace

SampleBatch metropolis_hastings(const Target& target, const MHConfig& cfg) {
  if (cfg.n_steps == 0) {
    throw ParameterError("metropolis_hastings: n_steps must be >= 1");
  }
  if (cfg.n_chains == 0) {
    throw ParameterError("metropolis_hastings: n_chains must be >= 1");
  }
  if (!(cfg.proposal_std > 0)) {
    throw ParameterError("metropolis_hastings: proposal_std must be > 0");
  }
  const std::size_t burn_in = cfg.effective_burn_in();
  if (burn_in >= cfg.n_steps) {
    throw ParameterError("metropolis_hastings: burn_in must be < n_steps");
  }

  const std::size_t kept = cfg.n_steps - burn_in;
  const int d = target.dimension();
  Eigen::MatrixXd points(static_cast<Eigen::Index>(cfg.n_chains * kept), d);
  Eigen::VectorXd logdens(points.rows());

  Eigen::VectorXd proposal(d);
  for (std::size_t chain = 0; chain < cfg.n_chains; ++chain) {
    Rng rng(derive_seed(cfg.seed, chain, "mh-chain"));
    double lp = -std::numeric_limits<double>::infinity();
    Eigen::VectorXd x = draw_initial(target, rng, lp);

    const Eigen::Index base = static_cast<Eigen::Index>(chain * kept);
    for (std::size_t step = 0; step < cfg.n_steps; ++step) {
      for (int j = 0; j < d; ++j) {
        proposal[j] = x[j] + cfg.proposal_std * rng.normal();
      }
      const double lp_new = target.log_density(proposal);
      // u in (0, 1] keeps log(u) finite; lp_new = -inf is always rejected.
      const double u = 1.0 - rng.uniform01();
      if (std::log(u) < lp_new - lp) {
        x = proposal;
        lp = lp_new;
      }
      if (step >= burn_in) {
        const Eigen::Index row = base + static_cast<Eigen::Index>(step - burn_in);
        points.row(row) = x.transpose();
        logdens[row] = lp;
      }
    }
  }

  return SampleBatch(std::move(points), std::nullopt, std::move(logdens),
                     "mh:" + target.name());
}

}  // namespace mcqual
