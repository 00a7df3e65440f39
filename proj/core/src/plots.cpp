#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "mcqual/errors.hpp"
#include "mcqual/report.hpp"

namespace mcqual {

namespace {

std::string fmt(double v) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string esc(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

void save_svg(const std::string& body, double width, double height,
              const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write SVG to " + path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt(width)
      << "\" height=\"" << fmt(height) << "\" viewBox=\"0 0 " << fmt(width)
      << " " << fmt(height) << "\" font-family=\"sans-serif\">\n"
      << body << "</svg>\n";
  if (!out) throw IoError("failed while writing SVG to " + path);
}

}  // namespace

void plot_overview(const ComparisonSummary& summary,
                   const std::string& path) {
  if (summary.rows.empty()) {
    throw ParameterError("plot_overview: empty summary");
  }

  const double label_w = 240.0;
  const double plot_w = 440.0;
  const double row_h = 26.0;
  const double top = 44.0;
  const double right_pad = 24.0;
  const double axis_min = -5.0, axis_max = 5.0;
  const double rows_h = row_h * static_cast<double>(summary.rows.size());
  const double bottom = top + rows_h;
  const double width = label_w + plot_w + right_pad;
  const double height = bottom + 40.0;
  const auto x_of = [&](double z) {
    return label_w + (z - axis_min) / (axis_max - axis_min) * plot_w;
  };

  std::ostringstream b;
  b << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\""
    << fmt(height) << "\" fill=\"#ffffff\"/>\n";
  b << "  <text x=\"" << fmt(label_w) << "\" y=\"24\" font-size=\"14\" "
       "fill=\"#333333\">normalized deviation from IID reference"
       " (z)</text>\n";

  // Nested tolerance bands: red covers |z| <= 3, yellow |z| <= 2 painted
  // over it, green |z| <= 1 on top, so each color remains visible only on
  // its own ring.
  const struct {
    double half;
    const char* color;
    const char* cls;
  } bands[] = {{3.0, "#f3c1c1", "band-3"},
               {2.0, "#f7e6a9", "band-2"},
               {1.0, "#bfe3bf", "band-1"}};
  for (const auto& band : bands) {
    b << "  <rect class=\"" << band.cls << "\" x=\"" << fmt(x_of(-band.half))
      << "\" y=\"" << fmt(top) << "\" width=\""
      << fmt(x_of(band.half) - x_of(-band.half)) << "\" height=\""
      << fmt(rows_h) << "\" fill=\"" << band.color << "\"/>\n";
  }

  for (double z : {-3.0, -2.0, -1.0, 0.0, 1.0, 2.0, 3.0}) {
    const bool zero = z == 0.0;
    b << "  <line class=\"guide\" data-z=\"" << fmt(z) << "\" x1=\""
      << fmt(x_of(z)) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(x_of(z))
      << "\" y2=\"" << fmt(bottom) << "\" stroke=\""
      << (zero ? "#444444" : "#999999") << "\" stroke-width=\""
      << (zero ? "1.5" : "0.8") << "\"/>\n";
    b << "  <text x=\"" << fmt(x_of(z)) << "\" y=\"" << fmt(bottom + 18.0)
      << "\" font-size=\"11\" fill=\"#555555\" text-anchor=\"middle\">"
      << fmt(z) << "</text>\n";
  }

  for (std::size_t i = 0; i < summary.rows.size(); ++i) {
    const ComparisonRow& row = summary.rows[i];
    const double cy = top + row_h * (static_cast<double>(i) + 0.5);
    b << "  <g class=\"metric-row\" data-metric=\"" << esc(row.metric)
      << "\" data-band=\"" << esc(row.band) << "\">\n";
    b << "    <text x=\"" << fmt(label_w - 10.0) << "\" y=\"" << fmt(cy + 4.0)
      << "\" font-size=\"12\" fill=\"#222222\" text-anchor=\"end\">"
      << esc(row.metric) << "</text>\n";
    if (row.z < axis_min || row.z > axis_max) {
      // Off-scale: arrow glyph at the clipped edge instead of a marker.
      const bool high = row.z > axis_max;
      const double tip = high ? x_of(axis_max) + 9.0 : x_of(axis_min) - 9.0;
      const double base = high ? x_of(axis_max) - 2.0 : x_of(axis_min) + 2.0;
      b << "    <polygon class=\"clip-arrow\" points=\"" << fmt(tip) << ","
        << fmt(cy) << " " << fmt(base) << "," << fmt(cy - 6.0) << " "
        << fmt(base) << "," << fmt(cy + 6.0)
        << "\" fill=\"#b71c1c\"/>\n";
    } else {
      const double lo = std::max(axis_min, row.z - row.std_ratio);
      const double hi = std::min(axis_max, row.z + row.std_ratio);
      b << "    <line class=\"errbar\" x1=\"" << fmt(x_of(lo)) << "\" y1=\""
        << fmt(cy) << "\" x2=\"" << fmt(x_of(hi)) << "\" y2=\"" << fmt(cy)
        << "\" stroke=\"#1565c0\" stroke-width=\"2\"/>\n";
      b << "    <circle class=\"marker\" cx=\"" << fmt(x_of(row.z))
        << "\" cy=\"" << fmt(cy) << "\" r=\"4\" fill=\"#1565c0\"/>\n";
    }
    b << "  </g>\n";
  }

  save_svg(b.str(), width, height, path);
}

void plot_teststatistic(const TestStatistic& ref, const TestStatistic& user,
                        int nbins, const std::string& path) {
  if (ref.metric != user.metric) {
    throw ParameterError("plot_teststatistic: metrics differ (" + ref.metric +
                         " vs " + user.metric + ")");
  }
  if (nbins < 1) {
    throw ParameterError("plot_teststatistic: nbins must be >= 1");
  }
  if (ref.values.empty() || user.values.empty()) {
    throw ParameterError("plot_teststatistic: empty value vector");
  }

  double lo = ref.values[0], hi = ref.values[0];
  for (const std::vector<double>* vs : {&ref.values, &user.values}) {
    for (double v : *vs) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (lo == hi) {  // all values identical: give the single spike some width
    lo -= 0.5;
    hi += 0.5;
  }
  const double bin_w = (hi - lo) / nbins;

  const auto fill_counts = [&](const std::vector<double>& vs,
                               std::vector<int>& counts) {
    counts.assign(static_cast<std::size_t>(nbins), 0);
    for (double v : vs) {
      int k = static_cast<int>((v - lo) / bin_w);
      k = std::clamp(k, 0, nbins - 1);  // v == hi lands in the last bin
      ++counts[static_cast<std::size_t>(k)];
    }
  };
  std::vector<int> counts_ref, counts_user;
  fill_counts(ref.values, counts_ref);
  fill_counts(user.values, counts_user);
  int peak = 1;
  for (int c : counts_ref) peak = std::max(peak, c);
  for (int c : counts_user) peak = std::max(peak, c);

  const double ml = 64.0, mr = 24.0, mt = 48.0, mb = 58.0;
  const double pw = 472.0, ph = 260.0;
  const double width = ml + pw + mr, height = mt + ph + mb;
  const auto x_of = [&](double v) { return ml + (v - lo) / (hi - lo) * pw; };
  const auto h_of = [&](int c) {
    return static_cast<double>(c) / peak * ph;
  };

  std::ostringstream b;
  b << "  <rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\""
    << fmt(height) << "\" fill=\"#ffffff\"/>\n";
  b << "  <text x=\"" << fmt(ml) << "\" y=\"24\" font-size=\"14\" "
       "fill=\"#333333\">" << esc(ref.testcase) << ": " << esc(ref.metric)
    << "</text>\n";

  const auto draw_series = [&](const std::vector<int>& counts,
                               const char* cls, const char* color) {
    for (int k = 0; k < nbins; ++k) {
      const int c = counts[static_cast<std::size_t>(k)];
      const double x0 = x_of(lo + k * bin_w);
      const double x1 = x_of(lo + (k + 1) * bin_w);
      const double h = h_of(c);
      b << "  <rect class=\"" << cls << "\" data-count=\"" << c << "\" x=\""
        << fmt(x0) << "\" y=\"" << fmt(mt + ph - h) << "\" width=\""
        << fmt(x1 - x0) << "\" height=\"" << fmt(h) << "\" fill=\"" << color
        << "\" fill-opacity=\"0.55\" stroke=\"" << color
        << "\" stroke-width=\"0.8\"/>\n";
    }
  };
  draw_series(counts_ref, "bar-ref", "#1565c0");
  draw_series(counts_user, "bar-user", "#e65100");

  // Axes and ticks.
  b << "  <line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt + ph) << "\" x2=\""
    << fmt(ml + pw) << "\" y2=\"" << fmt(mt + ph)
    << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  b << "  <line x1=\"" << fmt(ml) << "\" y1=\"" << fmt(mt) << "\" x2=\""
    << fmt(ml) << "\" y2=\"" << fmt(mt + ph)
    << "\" stroke=\"#333333\" stroke-width=\"1\"/>\n";
  for (double v : {lo, 0.5 * (lo + hi), hi}) {
    b << "  <text x=\"" << fmt(x_of(v)) << "\" y=\"" << fmt(mt + ph + 18.0)
      << "\" font-size=\"11\" fill=\"#555555\" text-anchor=\"middle\">"
      << fmt(v) << "</text>\n";
  }
  b << "  <text x=\"" << fmt(ml - 10.0) << "\" y=\"" << fmt(mt + ph + 4.0)
    << "\" font-size=\"11\" fill=\"#555555\" text-anchor=\"end\">0</text>\n";
  b << "  <text x=\"" << fmt(ml - 10.0) << "\" y=\"" << fmt(mt + 4.0)
    << "\" font-size=\"11\" fill=\"#555555\" text-anchor=\"end\">" << peak
    << "</text>\n";
  b << "  <text x=\"" << fmt(ml + pw / 2.0) << "\" y=\""
    << fmt(height - 16.0)
    << "\" font-size=\"12\" fill=\"#333333\" text-anchor=\"middle\">"
    << esc(ref.metric) << " per batch</text>\n";
  b << "  <text x=\"18\" y=\"" << fmt(mt + ph / 2.0)
    << "\" font-size=\"12\" fill=\"#333333\" text-anchor=\"middle\" "
       "transform=\"rotate(-90 18 " << fmt(mt + ph / 2.0)
    << ")\">count</text>\n";

  // Legend.
  const double lx = ml + pw - 150.0;
  const struct {
    const char* color;
    const std::string& label;
  } legend[] = {{"#1565c0", ref.role}, {"#e65100", user.role}};
  for (int i = 0; i < 2; ++i) {
    const double ly = mt + 10.0 + 18.0 * i;
    b << "  <rect x=\"" << fmt(lx) << "\" y=\"" << fmt(ly)
      << "\" width=\"12\" height=\"12\" fill=\"" << legend[i].color
      << "\" fill-opacity=\"0.55\"/>\n";
    b << "  <text x=\"" << fmt(lx + 18.0) << "\" y=\"" << fmt(ly + 10.0)
      << "\" font-size=\"11\" fill=\"#333333\">" << esc(legend[i].label)
      << "</text>\n";
  }

  save_svg(b.str(), width, height, path);
}

}  // namespace mcqual
