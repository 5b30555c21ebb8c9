#pragma once

// Deterministic CSV and SVG writers. Numbers use scientific notation with
// 17 significant digits so that every double round-trips.

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace pem::cli {

/// A result file could not be written.
class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// "%.16e" formatting.
std::string format_number(double value);

/// Comma-separated file with a header row and LF line endings.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

  void row(const std::vector<double>& values);
  /// Mixed row: text cells are written verbatim and must not contain commas.
  void row(const std::vector<std::string>& cells);
  /// Flushes and throws OutputError if anything failed.
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

struct Series {
  std::string name;
  std::vector<double> x;
  std::vector<double> y;
};

/// Minimal line chart: axes, min/max tick labels, one polyline per series.
void write_svg_chart(const std::filesystem::path& path, const std::string& title,
                     const std::string& x_label, const std::vector<Series>& series);

}  // namespace pem::cli
