#pragma once

namespace mcqual {

// Written into every report; bump on releases.
inline constexpr const char* kToolVersion = "0.1.0";

// Report JSON layout version. Readers reject anything else.
inline constexpr int kSchemaVersion = 1;

}  // namespace mcqual
