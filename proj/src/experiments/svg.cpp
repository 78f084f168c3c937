#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "uwoc/experiments.hpp"

namespace uwoc::experiments {

namespace {

constexpr double kWidth = 820.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 200.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;
constexpr double kLogFloor = -10.0;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

}  // namespace

std::string render_svg(const std::string& title, const std::string& x_label,
                       const std::vector<OutageCurve>& curves) {
  double x_min = std::numeric_limits<double>::infinity();
  double x_max = -x_min;
  double y_min = 0.0;
  for (const auto& c : curves) {
    for (const auto& p : c.points) {
      x_min = std::min(x_min, p.pt_dbm);
      x_max = std::max(x_max, p.pt_dbm);
      if (p.value > 0.0) y_min = std::min(y_min, std::floor(std::log10(p.value)));
    }
  }
  if (!std::isfinite(x_min) || x_min == x_max) {
    x_min = 0.0;
    x_max = 1.0;
  }
  y_min = std::max(y_min == 0.0 ? -1.0 : y_min, kLogFloor);

  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  auto sx = [&](double x) { return kLeft + (x - x_min) / (x_max - x_min) * pw; };
  auto sy = [&](double v) {
    const double l = std::clamp(std::log10(v), y_min, 0.0);
    return kTop + (0.0 - l) / (0.0 - y_min) * ph;
  };

  std::ostringstream s;
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
    << kHeight << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
    << title << "</text>\n";
  s << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int d = static_cast<int>(y_min); d <= 0; ++d) {
    const double y = sy(std::pow(10.0, d));
    s << "<line x1=\"" << kLeft << "\" x2=\"" << kLeft + pw << "\" y1=\"" << num(y) << "\" y2=\""
      << num(y) << "\" stroke=\"#ddd\"/>\n";
    s << "<text x=\"" << kLeft - 6 << "\" y=\"" << num(y + 4)
      << "\" text-anchor=\"end\">1e" << d << "</text>\n";
  }
  for (int i = 0; i <= 10; ++i) {
    const double xv = x_min + (x_max - x_min) * i / 10.0;
    s << "<text x=\"" << num(sx(xv)) << "\" y=\"" << num(kTop + ph + 18)
      << "\" text-anchor=\"middle\">" << num(xv) << "</text>\n";
  }
  s << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(kHeight - 16)
    << "\" text-anchor=\"middle\">" << x_label << "</text>\n";

  // One colour per (scheme, N); dashes mark asymptotics, dots Monte Carlo.
  std::vector<std::pair<std::string, int>> keys;
  int legend_row = 0;
  for (const auto& c : curves) {
    if (c.source == CurveSource::mc_ci_low || c.source == CurveSource::mc_ci_high) continue;
    const std::pair<std::string, int> key{c.scheme, c.n};
    auto it = std::find(keys.begin(), keys.end(), key);
    if (it == keys.end()) it = keys.insert(keys.end(), key);
    const char* colour = kPalette[(it - keys.begin()) % std::size(kPalette)];

    std::ostringstream path;
    bool pen_down = false;
    for (const auto& p : c.points) {
      if (!(p.value > 0.0) || std::log10(p.value) < y_min) {
        pen_down = false;
        continue;
      }
      if (c.source == CurveSource::monte_carlo) {
        s << "<circle cx=\"" << num(sx(p.pt_dbm)) << "\" cy=\"" << num(sy(p.value))
          << "\" r=\"3\" fill=\"none\" stroke=\"" << colour << "\"/>\n";
        continue;
      }
      path << (pen_down ? " L" : " M") << num(sx(p.pt_dbm)) << "," << num(sy(p.value));
      pen_down = true;
    }
    if (!path.str().empty()) {
      s << "<path d=\"" << path.str() << "\" fill=\"none\" stroke=\"" << colour
        << "\" stroke-width=\"1.6\""
        << (c.source == CurveSource::asymptotic ? " stroke-dasharray=\"6,4\"" : "") << "/>\n";
    }
    const double ly = kTop + 14 + 18 * legend_row++;
    const double lx = kLeft + pw + 14;
    s << "<line x1=\"" << lx << "\" x2=\"" << lx + 24 << "\" y1=\"" << ly - 4 << "\" y2=\""
      << ly - 4 << "\" stroke=\"" << colour << "\""
      << (c.source == CurveSource::asymptotic ? " stroke-dasharray=\"6,4\"" : "")
      << (c.source == CurveSource::monte_carlo ? " stroke-dasharray=\"1,5\"" : "") << "/>\n";
    s << "<text x=\"" << lx + 30 << "\" y=\"" << ly << "\">" << c.scheme << " N=" << c.n << " "
      << to_string(c.source) << "</text>\n";
  }
  s << "</svg>\n";
  return s.str();
}

}  // namespace uwoc::experiments
