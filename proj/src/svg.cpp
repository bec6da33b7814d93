#include "prethermo/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <fmt/format.h>

#include "prethermo/errors.hpp"

namespace prethermo {

namespace {
constexpr double kWidth = 720, kHeight = 480;
constexpr double kLeft = 80, kRight = 160, kTop = 40, kBottom = 60;
const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string tick_label(double v, bool log_axis) {
  if (log_axis) return fmt::format("1e{:.0f}", std::log10(v));
  return fmt::format("{:.3g}", v);
}
}  // namespace

LineChart::LineChart(std::string title, std::string x_label, std::string y_label)
    : title_(std::move(title)), x_label_(std::move(x_label)), y_label_(std::move(y_label)) {}

void LineChart::add_series(const std::string& name, const std::vector<double>& x,
                           const std::vector<double>& y) {
  if (x.size() != y.size()) throw DomainError("LineChart: x/y size mismatch");
  series_.push_back({name, x, y});
}

std::string LineChart::render() const {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series_) {
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i], yv = s.y[i];
      if ((log_x_ && xv <= 0.0) || (log_y_ && yv <= 0.0)) continue;
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      xmin = std::min(xmin, xv);
      xmax = std::max(xmax, xv);
      ymin = std::min(ymin, yv);
      ymax = std::max(ymax, yv);
    }
  }
  if (!(xmin < xmax)) xmax = xmin + 1.0;
  if (!(ymin < ymax)) {
    ymin -= 0.5;
    ymax += 0.5;
  }
  auto tx = [&](double v) {
    double a = log_x_ ? std::log10(v) : v;
    double lo = log_x_ ? std::log10(xmin) : xmin;
    double hi = log_x_ ? std::log10(xmax) : xmax;
    return kLeft + (a - lo) / (hi - lo) * (kWidth - kLeft - kRight);
  };
  auto ty = [&](double v) {
    double a = log_y_ ? std::log10(v) : v;
    double lo = log_y_ ? std::log10(ymin) : ymin;
    double hi = log_y_ ? std::log10(ymax) : ymax;
    return kHeight - kBottom - (a - lo) / (hi - lo) * (kHeight - kTop - kBottom);
  };

  std::string svg = fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\""
      " font-family=\"sans-serif\" font-size=\"12\">\n",
      kWidth, kHeight);
  svg += fmt::format("<rect width=\"{}\" height=\"{}\" fill=\"white\"/>\n", kWidth, kHeight);
  svg += fmt::format(
      "<rect x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"none\""
      " stroke=\"black\"/>\n",
      kLeft, kTop, kWidth - kLeft - kRight, kHeight - kTop - kBottom);
  svg += fmt::format(
      "<text x=\"{}\" y=\"{}\" text-anchor=\"middle\" font-size=\"15\">{}</text>\n",
      kLeft + (kWidth - kLeft - kRight) / 2, kTop - 14, title_);
  svg += fmt::format("<text x=\"{}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n",
                     kLeft + (kWidth - kLeft - kRight) / 2, kHeight - 14, x_label_);
  svg += fmt::format(
      "<text x=\"18\" y=\"{}\" text-anchor=\"middle\""
      " transform=\"rotate(-90 18 {})\">{}</text>\n",
      kTop + (kHeight - kTop - kBottom) / 2, kTop + (kHeight - kTop - kBottom) / 2,
      y_label_);

  const int ticks = 5;
  for (int i = 0; i <= ticks; ++i) {
    double fx, fy;
    if (log_x_) {
      double lo = std::log10(xmin), hi = std::log10(xmax);
      fx = std::pow(10.0, lo + (hi - lo) * i / ticks);
    } else {
      fx = xmin + (xmax - xmin) * i / ticks;
    }
    if (log_y_) {
      double lo = std::log10(ymin), hi = std::log10(ymax);
      fy = std::pow(10.0, lo + (hi - lo) * i / ticks);
    } else {
      fy = ymin + (ymax - ymin) * i / ticks;
    }
    svg += fmt::format(
        "<line x1=\"{0:.1f}\" y1=\"{1}\" x2=\"{0:.1f}\" y2=\"{2}\" stroke=\"black\"/>\n",
        tx(fx), kHeight - kBottom, kHeight - kBottom + 5);
    svg += fmt::format(
        "<text x=\"{:.1f}\" y=\"{}\" text-anchor=\"middle\">{}</text>\n", tx(fx),
        kHeight - kBottom + 18, tick_label(fx, log_x_));
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"black\"/>\n",
        kLeft - 5, ty(fy), kLeft);
    svg += fmt::format(
        "<text x=\"{}\" y=\"{:.1f}\" text-anchor=\"end\">{}</text>\n", kLeft - 8,
        ty(fy) + 4, tick_label(fy, log_y_));
  }

  std::size_t color = 0;
  for (const auto& s : series_) {
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      double xv = s.x[i], yv = s.y[i];
      if ((log_x_ && xv <= 0.0) || (log_y_ && yv <= 0.0)) continue;
      if (!std::isfinite(xv) || !std::isfinite(yv)) continue;
      points += fmt::format("{:.1f},{:.1f} ", tx(xv), ty(yv));
    }
    const char* stroke = kPalette[color % 8];
    svg += fmt::format(
        "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"1.5\"/>\n",
        points, stroke);
    double ly = kTop + 16.0 + 18.0 * static_cast<double>(color);
    svg += fmt::format(
        "<line x1=\"{0}\" y1=\"{1:.1f}\" x2=\"{2}\" y2=\"{1:.1f}\" stroke=\"{3}\""
        " stroke-width=\"1.5\"/>\n",
        kWidth - kRight + 10, ly, kWidth - kRight + 34, stroke);
    svg += fmt::format("<text x=\"{}\" y=\"{:.1f}\">{}</text>\n", kWidth - kRight + 40,
                       ly + 4, s.name);
    ++color;
  }
  svg += "</svg>\n";
  return svg;
}

void LineChart::write(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError(fmt::format("cannot open '{}' for writing", path));
  out << render();
}

}  // namespace prethermo
