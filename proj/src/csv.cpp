#include "prethermo/csv.hpp"

#include <limits>
#include <sstream>

#include <fmt/format.h>

#include "prethermo/errors.hpp"

namespace prethermo {

std::string format_number(double v) { return fmt::format("{}", v); }

CsvWriter::CsvWriter(const std::string& path)
    : path_(path), out_(path, std::ios::binary) {
  if (!out_) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
}

void CsvWriter::line(const std::vector<std::string>& cells) {
  out_ << fmt::format("{}\n", fmt::join(cells, ","));
}

void CsvWriter::header(const std::vector<std::string>& columns) {
  columns_ = columns.size();
  line(columns);
}

void CsvWriter::row(const std::vector<double>& values) {
  std::vector<std::string> cells;
  cells.reserve(values.size());
  for (double v : values) cells.push_back(format_number(v));
  row(cells);
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (columns_ != 0 && cells.size() != columns_)
    throw InvariantError(fmt::format("csv row has {} cells, header has {} ({})",
                                     cells.size(), columns_, path_));
  line(cells);
}

void CsvWriter::footer(const std::string& record) {
  out_ << fmt::format("# {}\n", record);
}

std::size_t CsvTable::column_index(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i)
    if (columns[i] == name) return i;
  throw DomainError(fmt::format("csv column '{}' not found", name));
}

std::vector<double> CsvTable::column(const std::string& name) const {
  std::size_t idx = column_index(name);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r.at(idx));
  return out;
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError(fmt::format("cannot open '{}'", path));
  CsvTable table;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      table.footers.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    std::vector<std::string> cells;
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!have_header) {
      table.columns = cells;
      have_header = true;
      continue;
    }
    std::vector<double> vals;
    vals.reserve(cells.size());
    for (const auto& c : cells) {
      try {
        vals.push_back(std::stod(c));
      } catch (const std::exception&) {
        vals.push_back(std::numeric_limits<double>::quiet_NaN());
      }
    }
    table.rows.push_back(std::move(vals));
  }
  return table;
}

}  // namespace prethermo
