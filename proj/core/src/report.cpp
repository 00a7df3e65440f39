#include "mcqual/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "mcqual/errors.hpp"

namespace mcqual {

namespace {

// 17 significant digits round-trip any binary64 value exactly.
std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  std::string out = buf;
  // Keep doubles lexically floating-point so parsers do not coerce them to
  // integers (which would drop the sign of -0.0).
  if (out.find_first_of(".eE") == std::string::npos) out += ".0";
  return out;
}

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += c;  // UTF-8 bytes pass through
        }
    }
  }
  out += '"';
  return out;
}

// The writer is hand-rolled rather than delegated to a JSON library so the
// field order, indentation, and number rendering are pinned down: a fixed
// seed must reproduce the report byte for byte.
std::string render(const ReportDocument& doc) {
  std::ostringstream out;
  out << "{\n";
  out << "  \"schema_version\": " << doc.schema_version << ",\n";
  out << "  \"tool_version\": " << quote(doc.tool_version) << ",\n";
  out << "  \"testcase\": " << quote(doc.testcase) << ",\n";
  out << "  \"sampler\": " << quote(doc.sampler) << ",\n";
  out << "  \"seed\": " << doc.seed << ",\n";
  out << "  \"m\": " << doc.m << ",\n";
  out << "  \"n\": " << doc.n << ",\n";
  out << "  \"statistics\": [";
  for (std::size_t i = 0; i < doc.statistics.size(); ++i) {
    const TestStatistic& ts = doc.statistics[i];
    out << (i ? ",\n" : "\n");
    out << "    {\n";
    out << "      \"role\": " << quote(ts.role) << ",\n";
    out << "      \"metric\": " << quote(ts.metric) << ",\n";
    out << "      \"values\": [";
    for (std::size_t j = 0; j < ts.values.size(); ++j) {
      out << (j ? ", " : "") << num(ts.values[j]);
    }
    out << "],\n";
    out << "      \"mean\": " << num(ts.mean) << ",\n";
    out << "      \"std\": " << num(ts.std) << "\n";
    out << "    }";
  }
  out << (doc.statistics.empty() ? "]" : "\n  ]") << ",\n";
  out << "  \"comparison\": [";
  for (std::size_t i = 0; i < doc.comparison.rows.size(); ++i) {
    const ComparisonRow& row = doc.comparison.rows[i];
    out << (i ? ",\n" : "\n");
    out << "    {\n";
    out << "      \"metric\": " << quote(row.metric) << ",\n";
    out << "      \"z\": " << num(row.z) << ",\n";
    out << "      \"std_ratio\": " << num(row.std_ratio) << ",\n";
    out << "      \"band\": " << quote(row.band) << ",\n";
    out << "      \"degenerate\": " << (row.degenerate ? "true" : "false")
        << "\n";
    out << "    }";
  }
  out << (doc.comparison.rows.empty() ? "]" : "\n  ]") << "\n";
  out << "}\n";
  return out.str();
}

}  // namespace

void write_report(const ReportDocument& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report to " + path);
  out << render(doc);
  if (!out) throw IoError("failed while writing report to " + path);
}

ReportDocument read_report(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open report " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("report " + path + " is not valid JSON: " + e.what());
  }
  if (!j.is_object() || !j.contains("schema_version")) {
    throw FormatError("report " + path + " has no schema_version field");
  }
  try {
    ReportDocument doc;
    doc.schema_version = j.at("schema_version").get<int>();
    if (doc.schema_version != kSchemaVersion) {
      throw FormatError("report " + path + " has unknown schema version " +
                        std::to_string(doc.schema_version));
    }
    doc.tool_version = j.at("tool_version").get<std::string>();
    doc.testcase = j.at("testcase").get<std::string>();
    doc.sampler = j.at("sampler").get<std::string>();
    doc.seed = j.at("seed").get<std::uint64_t>();
    doc.m = j.at("m").get<std::size_t>();
    doc.n = j.at("n").get<std::size_t>();
    for (const auto& s : j.at("statistics")) {
      TestStatistic ts;
      ts.testcase = doc.testcase;
      ts.role = s.at("role").get<std::string>();
      ts.metric = s.at("metric").get<std::string>();
      ts.values = s.at("values").get<std::vector<double>>();
      ts.mean = s.at("mean").get<double>();
      ts.std = s.at("std").get<double>();
      doc.statistics.push_back(std::move(ts));
    }
    for (const auto& c : j.at("comparison")) {
      ComparisonRow row;
      row.metric = c.at("metric").get<std::string>();
      row.z = c.at("z").get<double>();
      row.std_ratio = c.at("std_ratio").get<double>();
      row.band = c.at("band").get<std::string>();
      row.degenerate = c.value("degenerate", false);
      doc.comparison.rows.push_back(std::move(row));
    }
    return doc;
  } catch (const FormatError&) {
    throw;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("report " + path + " has unexpected structure: " +
                      e.what());
  }
}

ReportDocument merge_reports(const ReportDocument& a,
                             const ReportDocument& b) {
  if (a.testcase != b.testcase || a.sampler != b.sampler || a.n != b.n) {
    throw ParameterError(
        "merge_reports: documents describe different runs (testcase, "
        "sampler, and n must match)");
  }
  if (a.statistics.size() != b.statistics.size()) {
    throw ParameterError("merge_reports: statistic lists differ in length");
  }
  ReportDocument merged = a;
  merged.m = a.m + b.m;
  for (std::size_t i = 0; i < a.statistics.size(); ++i) {
    const TestStatistic& sa = a.statistics[i];
    const TestStatistic& sb = b.statistics[i];
    if (sa.metric != sb.metric || sa.role != sb.role) {
      throw ParameterError("merge_reports: statistic mismatch at position " +
                           std::to_string(i) + " (" + sa.role + " " +
                           sa.metric + " vs " + sb.role + " " + sb.metric +
                           ")");
    }
    TestStatistic& out = merged.statistics[i];
    out.values.insert(out.values.end(), sb.values.begin(), sb.values.end());
    double sum = 0.0;
    for (double v : out.values) sum += v;
    out.mean = sum / static_cast<double>(out.values.size());
    double ss = 0.0;
    for (double v : out.values) ss += (v - out.mean) * (v - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(out.values.size() - 1));
  }

  // Rebuild the comparison from the merged distributions.
  std::vector<TestStatistic> ref, user;
  for (const TestStatistic& ts : merged.statistics) {
    (ts.role == "user" ? user : ref).push_back(ts);
  }
  merged.comparison =
      user.empty() ? ComparisonSummary{} : compare(ref, user);
  return merged;
}

}  // namespace mcqual
