#include "cccp/svg_chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cccp/error.hpp"

namespace cccp {

namespace {

constexpr double kPanelW = 480, kPanelH = 340;
constexpr double kLeft = 70, kRight = 20, kTop = 36, kBottom = 50;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string esc(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  bool empty() const { return !(lo <= hi); }
  void pad() {
    if (empty()) {
      lo = 0;
      hi = 1;
    } else if (hi - lo < 1e-300) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
};

void render_panel(std::ostringstream& os, const ChartPanel& p, double ox) {
  // transformed (x, y) per series, y in log10 when requested
  std::vector<std::vector<std::pair<double, double>>> pts(p.series.size());
  Range rx, ry;
  for (std::size_t s = 0; s < p.series.size(); ++s) {
    const Series& ser = p.series[s];
    const std::size_t n = std::min(ser.x.size(), ser.y.size());
    for (std::size_t i = 0; i < n; ++i) {
      double x = ser.x[i], y = ser.y[i];
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      if (p.log_y) {
        if (y <= 0) continue;
        y = std::log10(y);
      }
      pts[s].emplace_back(x, y);
      rx.add(x);
      ry.add(y);
    }
  }
  rx.pad();
  if (p.log_y && !ry.empty()) {
    ry.lo = std::floor(ry.lo);
    ry.hi = std::ceil(ry.hi);
  }
  ry.pad();

  const double pw = kPanelW - kLeft - kRight, ph = kPanelH - kTop - kBottom;
  auto sx = [&](double x) { return ox + kLeft + (x - rx.lo) / (rx.hi - rx.lo) * pw; };
  auto sy = [&](double y) { return kTop + ph - (y - ry.lo) / (ry.hi - ry.lo) * ph; };

  os << "<rect x=\"" << num(ox + kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw)
     << "\" height=\"" << num(ph) << "\" fill=\"none\" stroke=\"#333\"/>\n";
  os << "<text x=\"" << num(ox + kLeft + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" "
     << "font-size=\"14\">" << esc(p.title) << "</text>\n";
  os << "<text x=\"" << num(ox + kLeft + pw / 2) << "\" y=\"" << num(kPanelH - 10)
     << "\" text-anchor=\"middle\" font-size=\"12\">" << esc(p.x_label) << "</text>\n";
  os << "<text transform=\"translate(" << num(ox + 16) << "," << num(kTop + ph / 2)
     << ") rotate(-90)\" text-anchor=\"middle\" font-size=\"12\">" << esc(p.y_label)
     << "</text>\n";

  // y ticks: integer decades on log axes, 5 even ticks otherwise
  std::vector<double> yt;
  if (p.log_y) {
    const double step = std::max(1.0, std::ceil((ry.hi - ry.lo) / 8));
    for (double v = std::ceil(ry.lo); v <= ry.hi + 1e-9; v += step) yt.push_back(v);
  } else {
    for (int i = 0; i <= 4; ++i) yt.push_back(ry.lo + (ry.hi - ry.lo) * i / 4);
  }
  for (double v : yt) {
    const double y = sy(v);
    os << "<line x1=\"" << num(ox + kLeft) << "\" y1=\"" << num(y) << "\" x2=\""
       << num(ox + kLeft + pw) << "\" y2=\"" << num(y) << "\" stroke=\"#ddd\"/>\n";
    const std::string label = p.log_y ? "1e" + tick_label(v) : tick_label(v);
    os << "<text x=\"" << num(ox + kLeft - 4) << "\" y=\"" << num(y + 4)
       << "\" text-anchor=\"end\" font-size=\"10\">" << label << "</text>\n";
  }
  for (int i = 0; i <= 4; ++i) {
    const double v = rx.lo + (rx.hi - rx.lo) * i / 4;
    os << "<text x=\"" << num(sx(v)) << "\" y=\"" << num(kTop + ph + 14)
       << "\" text-anchor=\"middle\" font-size=\"10\">" << tick_label(v) << "</text>\n";
  }

  for (std::size_t s = 0; s < pts.size(); ++s) {
    const char* color = kPalette[s % std::size(kPalette)];
    if (!pts[s].empty()) {
      os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
      for (auto [x, y] : pts[s]) os << num(sx(x)) << ',' << num(sy(y)) << ' ';
      os << "\"/>\n";
    }
    const double ly = kTop + 14 + 14 * static_cast<double>(s);
    os << "<line x1=\"" << num(ox + kLeft + pw - 120) << "\" y1=\"" << num(ly - 4) << "\" x2=\""
       << num(ox + kLeft + pw - 104) << "\" y2=\"" << num(ly - 4) << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << num(ox + kLeft + pw - 100) << "\" y=\"" << num(ly)
       << "\" font-size=\"10\">" << esc(p.series[s].name) << "</text>\n";
  }
}

}  // namespace

std::string render_svg(const std::vector<ChartPanel>& panels) {
  std::ostringstream os;
  const double width = kPanelW * static_cast<double>(std::max<std::size_t>(1, panels.size()));
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\""
     << num(kPanelH) << "\" font-family=\"sans-serif\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t i = 0; i < panels.size(); ++i) {
    render_panel(os, panels[i], kPanelW * static_cast<double>(i));
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg_file(const std::filesystem::path& path, const std::vector<ChartPanel>& panels) {
  std::ofstream f(path);
  if (!f) throw Error(ErrorKind::IoError, "cannot open " + path.string() + " for writing");
  f << render_svg(panels);
  if (!f) throw Error(ErrorKind::IoError, "write failed: " + path.string());
}

}  // namespace cccp
