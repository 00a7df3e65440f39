#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mcqual/targets.hpp"

namespace mcqual {

/// Tunables for the built-in target catalog. Everything has a sensible
/// default; a JSON config file can override individual fields.
struct CatalogConfig {
  /// Observed effects and their standard errors for the hierarchical
  /// ten-parameter posterior ("Eight-Schools"). Both must have length 8.
  Eigen::VectorXd eight_schools_y;
  Eigen::VectorXd eight_schools_sigma;

  /// Distance of each mixture component mean from the origin along the
  /// all-ones direction.
  double mixture_offset = 5.0;

  static CatalogConfig defaults();

  /// Loads overrides from a JSON object file. Recognized keys:
  /// "eight_schools_y", "eight_schools_sigma" (arrays of 8 numbers) and
  /// "mixture_offset" (number). Unknown keys raise FormatError so typos
  /// do not silently fall back to defaults.
  static CatalogConfig from_json_file(const std::string& path);
};

/// All built-in targets, in a fixed presentation order that is stable
/// across runs and releases.
std::vector<TargetPtr> catalog(const CatalogConfig& cfg);

/// Looks up a built-in target by its exact name. Throws NotFoundError for
/// unknown names, listing the available ones.
TargetPtr find_target(const std::string& name, const CatalogConfig& cfg);

}  // namespace mcqual
