#pragma once

#include <stdexcept>

namespace mcqual {

// Error taxonomy shared across the suite. The CLI maps these onto its exit
// codes: ParameterError / NotFoundError are usage errors (exit 1); everything
// else is a data error (exit 3).

// Invalid argument values, mismatched shapes, out-of-range hyperparameters.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Catalog lookup by a name that does not exist.
struct NotFoundError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed CSV/JSON input; messages carry row numbers where applicable.
struct FormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A batch does not hold enough effective samples for the requested partition.
struct CapacityError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Metric/target combination that cannot be computed (no analytic marginal).
struct UnsupportedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A bounded-retry loop (accept-reject, chain initialization) hit its cap.
struct ProgressError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input too degenerate to compute on (single point, zero median distance).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Filesystem failures (unreadable/unwritable paths).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace mcqual
