#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mcqual/harness.hpp"
#include "mcqual/version.hpp"

namespace mcqual {

/// Everything one benchmark run produces: configuration echo, the
/// per-metric sampling distributions for both roles, and the normalized
/// comparison. Serialized as JSON with a fixed field order and 17
/// significant digits, so a fixed seed reproduces the file byte for byte.
struct ReportDocument {
  int schema_version = kSchemaVersion;
  std::string tool_version = kToolVersion;
  std::string testcase;
  std::string sampler;  ///< e.g. "mh(n_steps=...,...)" or "file:path.csv"
  std::uint64_t seed = 0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::vector<TestStatistic> statistics;  ///< reference block, then user
  ComparisonSummary comparison;
};

/// Writes the document as JSON. Throws IoError when the path cannot be
/// written.
void write_report(const ReportDocument& doc, const std::string& path);

/// Parses a report written by write_report. Throws IoError for unreadable
/// paths and FormatError for malformed JSON, a missing or unknown schema
/// version, or fields of the wrong shape.
ReportDocument read_report(const std::string& path);

/// Combines two runs of the same benchmark configuration (same testcase,
/// sampler, n, and metric set; typically different seeds): value vectors of
/// matching statistics are concatenated, summaries and the comparison are
/// recomputed, and m becomes the total batch count. The first document's
/// seed and version fields are kept. Throws ParameterError when the
/// documents do not match.
ReportDocument merge_reports(const ReportDocument& a,
                             const ReportDocument& b);

/// Renders the normalized comparison as a self-contained SVG: one row per
/// metric on a fixed [-5, 5] z-axis with green/yellow/red bands at
/// +-1/2/3, a marker at each z with a horizontal error bar of half-width
/// std_ratio, and an arrow glyph for markers beyond the axis range.
/// Throws ParameterError for an empty summary, IoError for unwritable
/// paths.
void plot_overview(const ComparisonSummary& summary, const std::string& path);

/// Renders reference and user value distributions for one metric as two
/// overlaid equal-width histograms (`nbins` bins over the union range) in a
/// self-contained SVG. Throws ParameterError when the two statistics
/// describe different metrics or nbins < 1, IoError for unwritable paths.
void plot_teststatistic(const TestStatistic& ref, const TestStatistic& user,
                        int nbins, const std::string& path);

}  // namespace mcqual
