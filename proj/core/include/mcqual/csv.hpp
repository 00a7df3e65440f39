#pragma once

#include <filesystem>

#include "mcqual/sample_batch.hpp"

namespace mcqual {

// CSV interchange format: UTF-8, comma-separated, mandatory header with
// coordinate columns x_1..x_d plus optional `weight` and `logpdf` columns.
// Values are written with 17 significant digits so a write/read round trip
// reproduces every finite double bit-for-bit.

// Throws FormatError (with the offending row number) on missing coordinate
// columns, non-numeric cells, inconsistent row lengths, NaN/Inf values, or
// negative weights; throws IoError when the file cannot be opened.
SampleBatch read_csv(const std::filesystem::path& path);

void write_csv(const SampleBatch& batch, const std::filesystem::path& path);

// "%.17g" rendering shared by the CSV and JSON writers.
std::string format_double(double value);

}  // namespace mcqual
