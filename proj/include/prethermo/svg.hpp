#pragma once

#include <string>
#include <vector>

namespace prethermo {

/// Minimal self-contained SVG line chart. Points with nonpositive coordinates
/// on a log axis are dropped from that series.
class LineChart {
 public:
  LineChart(std::string title, std::string x_label, std::string y_label);

  void log_x(bool on) { log_x_ = on; }
  void log_y(bool on) { log_y_ = on; }
  void add_series(const std::string& name, const std::vector<double>& x,
                  const std::vector<double>& y);

  std::string render() const;
  void write(const std::string& path) const;

 private:
  struct Series {
    std::string name;
    std::vector<double> x, y;
  };
  std::string title_, x_label_, y_label_;
  bool log_x_ = false, log_y_ = false;
  std::vector<Series> series_;
};

}  // namespace prethermo
