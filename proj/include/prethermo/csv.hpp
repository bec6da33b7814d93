#pragma once

#include <fstream>
#include <string>
#include <vector>

namespace prethermo {

/// Shortest decimal form that round-trips to the same double, so reruns with
/// the same seed produce byte-identical files.
std::string format_number(double v);

/// Comma-separated file with one header row and optional #-prefixed footer
/// records for deviations and metadata.
class CsvWriter {
 public:
  explicit CsvWriter(const std::string& path);

  void header(const std::vector<std::string>& columns);
  void row(const std::vector<double>& values);
  void row(const std::vector<std::string>& cells);
  void footer(const std::string& record);

  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t columns_ = 0;
  void line(const std::vector<std::string>& cells);
};

/// Parsed CSV body (footers and header excluded), for tests and plotting.
struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::string> footers;

  std::size_t column_index(const std::string& name) const;
  std::vector<double> column(const std::string& name) const;
};
CsvTable read_csv(const std::string& path);

}  // namespace prethermo
