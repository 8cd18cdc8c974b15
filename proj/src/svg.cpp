#include "qhmcgp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

#include "qhmcgp/error.hpp"

namespace qhmcgp {

namespace {

std::string fmt(double v, int precision = 2) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

std::string tick_label(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", std::fabs(v) < 1e-12 ? 0.0 : v);
  return buf;
}

// Round step to 1, 2 or 5 times a power of ten.
double nice_step(double span, int target_ticks) {
  const double raw = span / std::max(1, target_ticks);
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double f = raw / mag;
  const double nice = f < 1.5 ? 1.0 : f < 3.0 ? 2.0 : f < 7.0 ? 5.0 : 10.0;
  return nice * mag;
}

struct Range {
  double lo, hi;
};

Range padded(double lo, double hi) {
  if (!(hi > lo)) {
    const double pad = std::fabs(lo) > 0 ? 0.1 * std::fabs(lo) : 1.0;
    return {lo - pad, hi + pad};
  }
  return {lo, hi};
}

}  // namespace

std::string xml_escape(const std::string& text) {
  std::string out;
  for (char c : text) {
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

std::string render_line_chart(const std::vector<ChartSeries>& series, const ChartOptions& opt) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const ChartSeries& s : series) {
    if (s.x.size() != s.y.size()) throw InvalidArgument("chart: series '" + s.name + "' has mismatched x/y");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  ymin = std::min(ymin, 0.0);
  const Range xr = padded(xmin, xmax);
  Range yr = padded(ymin, ymax);
  const double ystep = nice_step(yr.hi - yr.lo, 5);
  yr.hi = std::ceil(yr.hi / ystep) * ystep;
  yr.lo = std::floor(yr.lo / ystep) * ystep;
  const double xstep = std::max(nice_step(xr.hi - xr.lo, 8), (xmax - xmin) >= 1.0 ? 1.0 : 0.0);

  const double left = 70, right = 20, top = 40, bottom = 55;
  const double pw = opt.width - left - right, ph = opt.height - top - bottom;
  auto sx = [&](double x) { return left + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto sy = [&](double y) { return top + ph - (y - yr.lo) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << opt.width << "\" height=\"" << opt.height
     << "\" viewBox=\"0 0 " << opt.width << ' ' << opt.height << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
     << "<rect x=\"0\" y=\"0\" width=\"" << opt.width << "\" height=\"" << opt.height << "\" fill=\"white\"/>\n";
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << xml_escape(opt.title) << "</text>\n";

  os << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
  for (double y = yr.lo; y <= yr.hi + 1e-9 * ystep; y += ystep) {
    os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(sy(y)) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
       << fmt(sy(y)) << "\"/>\n";
  }
  os << "</g>\n<g font-size=\"11\">\n";
  for (double y = yr.lo; y <= yr.hi + 1e-9 * ystep; y += ystep) {
    os << "<text x=\"" << fmt(left - 6) << "\" y=\"" << fmt(sy(y) + 4) << "\" text-anchor=\"end\">"
       << tick_label(y) << "</text>\n";
  }
  const double x0 = std::ceil(xr.lo / xstep) * xstep;
  for (double x = x0; x <= xr.hi + 1e-9 * xstep; x += xstep) {
    os << "<line x1=\"" << fmt(sx(x)) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(sx(x)) << "\" y2=\""
       << fmt(top + ph + 5) << "\" stroke=\"black\"/>\n"
       << "<text x=\"" << fmt(sx(x)) << "\" y=\"" << fmt(top + ph + 18) << "\" text-anchor=\"middle\">"
       << tick_label(x) << "</text>\n";
  }
  os << "</g>\n";
  os << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top + ph) << "\" x2=\"" << fmt(left + pw) << "\" y2=\""
     << fmt(top + ph) << "\" stroke=\"black\"/>\n"
     << "<line x1=\"" << fmt(left) << "\" y1=\"" << fmt(top) << "\" x2=\"" << fmt(left) << "\" y2=\""
     << fmt(top + ph) << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << fmt(left + pw / 2) << "\" y=\"" << fmt(opt.height - 12.0)
     << "\" text-anchor=\"middle\">" << xml_escape(opt.x_label) << "</text>\n";
  os << "<text x=\"18\" y=\"" << fmt(top + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
     << fmt(top + ph / 2) << ")\">" << xml_escape(opt.y_label) << "</text>\n";

  for (std::size_t k = 0; k < series.size(); ++k) {
    const ChartSeries& s = series[k];
    std::string points;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!points.empty()) points += ' ';
      points += fmt(sx(s.x[i])) + ',' + fmt(sy(s.y[i]));
    }
    os << "<polyline fill=\"none\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"2\" points=\"" << points
       << "\"/>\n";
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      os << "<circle cx=\"" << fmt(sx(s.x[i])) << "\" cy=\"" << fmt(sy(s.y[i])) << "\" r=\"3\" fill=\""
         << xml_escape(s.color) << "\"/>\n";
    }
    const double ly = top + 12 + 16.0 * k;
    os << "<line x1=\"" << fmt(left + pw - 150) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(left + pw - 130)
       << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << xml_escape(s.color) << "\" stroke-width=\"2\"/>\n"
       << "<text x=\"" << fmt(left + pw - 125) << "\" y=\"" << fmt(ly + 4) << "\">" << xml_escape(s.name)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace qhmcgp
