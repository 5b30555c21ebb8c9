#include "pem/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace pem::cli {

std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", value);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc), columns_(header.size()) {
  if (!out_) throw OutputError("cannot open '" + path.string() + "' for writing");
  row(header);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_)
    throw std::logic_error("CSV row width " + std::to_string(cells.size()) + " != header width " +
                           std::to_string(columns_));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.flush();
  if (!out_) throw OutputError("write to '" + path_.string() + "' failed");
  out_.close();
}

namespace {

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-300) lo -= 0.5, hi += 0.5;
  }
};

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string short_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

const char* const kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

}  // namespace

void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::vector<Series>& series) {
  constexpr double width = 640.0, height = 400.0;
  constexpr double left = 70.0, right = 150.0, top = 40.0, bottom = 50.0;
  const double pw = width - left - right, ph = height - top - bottom;

  Range xr, yr;
  for (const auto& s : series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
  }
  xr.settle();
  yr.settle();
  const auto px = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  const auto py = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw OutputError("cannot open '" + path.string() + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fixed(width) << "\" height=\""
      << fixed(height) << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << fixed(left) << "\" y=\"24\" font-size=\"14\">" << title << "</text>\n";
  out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top + ph) << "\" x2=\""
      << fixed(left + pw) << "\" y2=\"" << fixed(top + ph) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << fixed(left) << "\" y1=\"" << fixed(top) << "\" x2=\"" << fixed(left)
      << "\" y2=\"" << fixed(top + ph) << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << fixed(left) << "\" y=\"" << fixed(top + ph + 16) << "\">"
      << short_number(xr.lo) << "</text>\n";
  out << "<text x=\"" << fixed(left + pw) << "\" y=\"" << fixed(top + ph + 16)
      << "\" text-anchor=\"end\">" << short_number(xr.hi) << "</text>\n";
  out << "<text x=\"" << fixed(left + pw / 2) << "\" y=\"" << fixed(top + ph + 36)
      << "\" text-anchor=\"middle\">" << x_label << "</text>\n";
  out << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + ph)
      << "\" text-anchor=\"end\">" << short_number(yr.lo) << "</text>\n";
  out << "<text x=\"" << fixed(left - 6) << "\" y=\"" << fixed(top + 10)
      << "\" text-anchor=\"end\">" << short_number(yr.hi) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const auto& s = series[k];
    const char* colour = kColours[k % std::size(kColours)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      out << fixed(px(s.x[i])) << ',' << fixed(py(s.y[i])) << (i + 1 < n ? " " : "");
    }
    out << "\"/>\n";
    const double ly = top + 16.0 * static_cast<double>(k);
    out << "<line x1=\"" << fixed(left + pw + 12) << "\" y1=\"" << fixed(ly) << "\" x2=\""
        << fixed(left + pw + 32) << "\" y2=\"" << fixed(ly) << "\" stroke=\"" << colour
        << "\" stroke-width=\"1.5\"/>\n";
    out << "<text x=\"" << fixed(left + pw + 38) << "\" y=\"" << fixed(ly + 4) << "\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
  out.flush();
  if (!out) throw OutputError("write to '" + path.string() + "' failed");
}

}  // namespace pem::cli
