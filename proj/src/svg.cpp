#include "optomech/svg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace optomech::svg {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool log = false;

  bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }
  double map(double v) const { return log ? std::log10(v) : v; }
  void add(double v) {
    if (!usable(v)) return;
    lo = std::min(lo, map(v));
    hi = std::max(hi, map(v));
  }
  void finish() {
    if (!(hi >= lo)) lo = 0.0, hi = 1.0;
    if (hi == lo) lo -= 0.5, hi += 0.5;
  }
  double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

}  // namespace

std::string render(const Plot& plot, int width, int height) {
  const double left = 80, right = 20, top = 40, bottom = 60;
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  Axis ax{.log = plot.log_x};
  Axis ay{.log = plot.log_y};
  for (const auto& l : plot.lines) {
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (ax.usable(l.x[i]) && ay.usable(l.y[i])) {
        ax.add(l.x[i]);
        ay.add(l.y[i]);
      }
    }
  }
  ax.finish();
  ay.finish();

  std::ostringstream os;
  os.precision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(plot.title) << "</text>\n";
  os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = k / 4.0;
    const double vx = ax.lo + fx * (ax.hi - ax.lo);
    const double vy = ay.lo + fx * (ay.hi - ay.lo);
    const double px = left + fx * pw;
    const double py = top + ph - fx * ph;
    os << "<text x=\"" << px << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
       << (ax.log ? std::pow(10.0, vx) : vx) << "</text>\n";
    os << "<text x=\"" << left - 6 << "\" y=\"" << py + 4 << "\" text-anchor=\"end\">"
       << (ay.log ? std::pow(10.0, vy) : vy) << "</text>\n";
  }
  os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 18 << "\" text-anchor=\"middle\">"
     << escape(plot.x_label) << "</text>\n";
  os << "<text transform=\"translate(16," << top + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">"
     << escape(plot.y_label) << "</text>\n";

  for (std::size_t li = 0; li < plot.lines.size(); ++li) {
    const auto& l = plot.lines[li];
    const char* color = kColors[li % std::size(kColors)];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < std::min(l.x.size(), l.y.size()); ++i) {
      if (!ax.usable(l.x[i]) || !ay.usable(l.y[i])) continue;
      os << left + ax.frac(l.x[i]) * pw << "," << top + ph - ay.frac(l.y[i]) * ph << " ";
    }
    os << "\"/>\n";
    os << "<text x=\"" << left + pw - 6 << "\" y=\"" << top + 16 + 14 * li << "\" text-anchor=\"end\" fill=\""
       << color << "\">" << escape(l.label) << "</text>\n";
  }
  for (const auto& m : plot.markers) {
    if (!ax.usable(m.x)) continue;
    const double f = ax.frac(m.x);
    if (f < 0.0 || f > 1.0) continue;
    const double px = left + f * pw;
    os << "<line x1=\"" << px << "\" y1=\"" << top << "\" x2=\"" << px << "\" y2=\"" << top + ph
       << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";
    os << "<text x=\"" << px + 4 << "\" y=\"" << top + 14 << "\" fill=\"gray\">" << escape(m.label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace optomech::svg
