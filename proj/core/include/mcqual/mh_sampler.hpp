#pragma once

#include <cstdint>
#include <optional>

#include "mcqual/sample_batch.hpp"
#include "mcqual/targets.hpp"

namespace mcqual {

/// Random-walk Metropolis-Hastings configuration. One independent chain per
/// `n_chains`, each advanced `n_steps` times from a uniform draw inside the
/// target's bounds; the first `burn_in` states of every chain are discarded.
struct MHConfig {
  std::size_t n_steps = 10000;   ///< steps per chain (post-init)
  std::size_t n_chains = 1;
  double proposal_std = 1.0;     ///< isotropic Gaussian proposal scale
  std::optional<std::size_t> burn_in;  ///< default: n_steps / 10
  std::uint64_t seed = 0;

  /// Effective burn-in after applying the default.
  std::size_t effective_burn_in() const {
    return burn_in ? *burn_in : n_steps / 10;
  }
};

/// Runs random-walk Metropolis-Hastings and returns the retained states,
/// chain-major (all of chain 0, then chain 1, ...) so that serial
/// autocorrelation within each chain survives concatenation. Log-densities
/// of the retained states are attached to the batch. Chains use seeds
/// derived from cfg.seed, so the result is reproducible and independent of
/// how many chains run.
///
/// Throws ParameterError for invalid configuration (n_steps or n_chains
/// zero, proposal_std <= 0, burn_in >= n_steps) and ProgressError when no
/// initial point with finite log-density is found within 1000 uniform draws
/// from the bounds.
SampleBatch metropolis_hastings(const Target& target, const MHConfig& cfg);

}  // namespace mcqual
