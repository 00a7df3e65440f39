#include "mcqual/csv.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mcqual/errors.hpp"

namespace mcqual {

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row,
                  const std::string& column) {
  const char* begin = cell.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  // Trailing spaces are tolerated; anything else is a bad cell.
  while (end && *end == ' ') ++end;
  if (end == begin || (end && *end != '\0')) {
    throw FormatError("row " + std::to_string(row) + ": non-numeric value '" +
                      cell + "' in column " + column);
  }
  if (!std::isfinite(v)) {
    throw FormatError("row " + std::to_string(row) +
                      ": non-finite value in column " + column);
  }
  return v;
}

}  // namespace

SampleBatch read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string() + " for reading");

  std::string line;
  if (!std::getline(in, line)) {
    throw FormatError(path.string() + ": empty file, header row required");
  }
  if (!line.empty() && line.back() == '\r') line.pop_back();

  // Map header tokens to roles. Coordinate columns must form x_1..x_d.
  const std::vector<std::string> header = split_line(line);
  std::vector<int> coord_of(header.size(), -1);
  int weight_col = -1;
  int logpdf_col = -1;
  int d = 0;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const std::string& name = header[c];
    if (name == "weight") {
      weight_col = static_cast<int>(c);
    } else if (name == "logpdf") {
      logpdf_col = static_cast<int>(c);
    } else if (name.rfind("x_", 0) == 0) {
      int idx = 0;
      try {
        idx = std::stoi(name.substr(2));
      } catch (const std::exception&) {
        throw FormatError(path.string() + ": unrecognized column '" + name +
                          "'");
      }
      if (idx < 1) {
        throw FormatError(path.string() + ": coordinate index in '" + name +
                          "' must start at 1");
      }
      coord_of[c] = idx - 1;
      d = std::max(d, idx);
    } else {
      throw FormatError(path.string() + ": unrecognized column '" + name +
                        "'");
    }
  }
  if (d == 0) {
    throw FormatError(path.string() + ": no coordinate columns x_1..x_d");
  }
  std::vector<bool> seen(static_cast<std::size_t>(d), false);
  for (int c : coord_of) {
    if (c >= 0) seen[static_cast<std::size_t>(c)] = true;
  }
  for (int i = 0; i < d; ++i) {
    if (!seen[static_cast<std::size_t>(i)]) {
      throw FormatError(path.string() + ": missing coordinate column x_" +
                        std::to_string(i + 1));
    }
  }

  std::vector<double> coords;
  std::vector<double> weights;
  std::vector<double> logpdfs;
  std::size_t rows = 0;
  std::size_t lineno = 1;  // header was line 1
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_line(line);
    if (cells.size() != header.size()) {
      throw FormatError("row " + std::to_string(lineno) + ": expected " +
                        std::to_string(header.size()) + " cells, got " +
                        std::to_string(cells.size()));
    }
    coords.resize(coords.size() + static_cast<std::size_t>(d));
    double* point = coords.data() + rows * static_cast<std::size_t>(d);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (coord_of[c] >= 0) {
        point[coord_of[c]] = parse_cell(cells[c], lineno, header[c]);
      } else if (static_cast<int>(c) == weight_col) {
        const double w = parse_cell(cells[c], lineno, "weight");
        if (w < 0) {
          throw FormatError("row " + std::to_string(lineno) +
                            ": negative weight " + cells[c]);
        }
        weights.push_back(w);
      } else {
        logpdfs.push_back(parse_cell(cells[c], lineno, "logpdf"));
      }
    }
    ++rows;
  }
  if (rows == 0) {
    throw FormatError(path.string() + ": no data rows");
  }

  Eigen::MatrixXd points(static_cast<Eigen::Index>(rows), d);
  for (std::size_t i = 0; i < rows; ++i) {
    for (int j = 0; j < d; ++j) {
      points(static_cast<Eigen::Index>(i), j) =
          coords[i * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)];
    }
  }
  std::optional<Eigen::VectorXd> w;
  if (weight_col >= 0) {
    w = Eigen::Map<Eigen::VectorXd>(weights.data(),
                                    static_cast<Eigen::Index>(rows));
  }
  std::optional<Eigen::VectorXd> ld;
  if (logpdf_col >= 0) {
    ld = Eigen::Map<Eigen::VectorXd>(logpdfs.data(),
                                     static_cast<Eigen::Index>(rows));
  }
  try {
    return SampleBatch(std::move(points), std::move(w), std::move(ld),
                       path.string());
  } catch (const ParameterError& e) {
    // Re-tag container invariant violations (e.g. all-zero weights) as
    // format problems: the file, not the caller, is at fault.
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_csv(const SampleBatch& batch, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");

  const Eigen::Index d = batch.dimension();
  for (Eigen::Index j = 0; j < d; ++j) {
    if (j) out << ',';
    out << "x_" << (j + 1);
  }
  if (batch.has_weights()) out << ",weight";
  if (batch.has_logdensities()) out << ",logpdf";
  out << '\n';

  for (Eigen::Index i = 0; i < batch.size(); ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      if (j) out << ',';
      out << format_double(batch.points()(i, j));
    }
    if (batch.has_weights()) out << ',' << format_double(batch.weights()[i]);
    if (batch.has_logdensities()) {
      const double ld = batch.logdensities()[i];
      if (!std::isfinite(ld)) {
        throw FormatError("write_csv: non-finite logpdf at row " +
                          std::to_string(i + 2));
      }
      out << ',' << format_double(ld);
    }
    out << '\n';
  }
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace mcqual
