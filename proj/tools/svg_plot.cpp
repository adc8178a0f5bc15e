#include "svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "mcf/errors.hpp"

namespace mcf::cli {

namespace {

constexpr double kW = 640, kH = 480, kLeft = 70, kRight = 20, kTop = 40, kBottom = 50;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

// Ticks at 1, 2, 5 x 10^k for linear axes, at powers of ten for log axes.
std::vector<double> ticks(double lo, double hi, bool log) {
  std::vector<double> t;
  if (log) {
    for (double e = std::floor(lo); e <= std::ceil(hi) + 1e-9; e += 1)
      if (e >= lo - 1e-9 && e <= hi + 1e-9) t.push_back(e);
    return t;
  }
  const double span = hi - lo;
  const double raw = span / 6;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0})
    if (m * mag >= raw) {
      step = m * mag;
      break;
    }
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * span; v += step) t.push_back(std::abs(v) < 1e-12 * span ? 0.0 : v);
  return t;
}

}  // namespace

std::string render_svg(const Table& t, const PlotSpec& spec) {
  if (t.rows() == 0) fail(ErrorCode::Io, "nothing to plot");
  const bool log = spec.axes == Axes::LogLog;
  const auto& xs = t.col(spec.x);
  std::vector<std::string> ys = spec.y;
  if (ys.empty())
    for (const auto& n : t.names)
      if (n != spec.x) ys.push_back(n);
  if (ys.empty()) fail(ErrorCode::Io, "no y columns to plot");

  auto tx = [&](double v) { return log ? std::log10(std::abs(v)) : v; };
  double x0 = 1e300, x1 = -1e300, y0 = 1e300, y1 = -1e300;
  std::vector<std::vector<std::pair<double, double>>> series;
  for (const auto& name : ys) {
    const auto& col = t.col(name);
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (log && (xs[i] == 0 || col[i] == 0)) continue;
      if (!std::isfinite(xs[i]) || !std::isfinite(col[i])) continue;
      const double a = tx(xs[i]), b = tx(col[i]);
      x0 = std::min(x0, a), x1 = std::max(x1, a), y0 = std::min(y0, b), y1 = std::max(y1, b);
      pts.emplace_back(a, b);
    }
    series.push_back(std::move(pts));
  }
  if (x0 > x1) fail(ErrorCode::Io, "no plottable points");
  if (x1 - x0 < 1e-12) x0 -= 0.5, x1 += 0.5;
  if (y1 - y0 < 1e-12) y0 -= 0.5, y1 += 0.5;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double a) { return kLeft + (a - x0) / (x1 - x0) * pw; };
  auto py = [&](double b) { return kTop + (y1 - b) / (y1 - y0) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" viewBox=\"0 0 640 480\">\n";
  os << "<rect width=\"640\" height=\"480\" fill=\"white\"/>\n";
  os << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(pw) << "\" height=\"" << fmt(ph)
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double v : ticks(x0, x1, log)) {
    os << "<line x1=\"" << fmt(px(v)) << "\" y1=\"" << fmt(kTop + ph) << "\" x2=\"" << fmt(px(v)) << "\" y2=\""
       << fmt(kTop + ph + 5) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(px(v)) << "\" y=\"" << fmt(kTop + ph + 20)
       << "\" font-size=\"11\" text-anchor=\"middle\">" << (log ? "1e" + label(v) : label(v)) << "</text>\n";
  }
  for (double v : ticks(y0, y1, log)) {
    os << "<line x1=\"" << fmt(kLeft - 5) << "\" y1=\"" << fmt(py(v)) << "\" x2=\"" << fmt(kLeft) << "\" y2=\""
       << fmt(py(v)) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << fmt(kLeft - 8) << "\" y=\"" << fmt(py(v) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << (log ? "1e" + label(v) : label(v)) << "</text>\n";
  }
  os << "<text x=\"" << fmt(kLeft + pw / 2) << "\" y=\"" << fmt(kH - 10) << "\" font-size=\"12\" text-anchor=\"middle\">"
     << escape(spec.x) << "</text>\n";
  if (!spec.title.empty())
    os << "<text x=\"" << fmt(kW / 2) << "\" y=\"22\" font-size=\"14\" text-anchor=\"middle\">" << escape(spec.title)
       << "</text>\n";
  for (std::size_t k = 0; k < series.size(); ++k) {
    const char* color = kPalette[k % 6];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series[k].size(); ++i)
      os << (i ? " " : "") << fmt(px(series[k][i].first)) << ',' << fmt(py(series[k][i].second));
    os << "\"/>\n";
    os << "<text x=\"" << fmt(kLeft + 10) << "\" y=\"" << fmt(kTop + 16 + 14 * k) << "\" font-size=\"11\" fill=\""
       << color << "\">" << escape(ys[k]) << "</text>\n";
  }
  if (!spec.note.empty())
    os << "<text x=\"" << fmt(kLeft + pw - 10) << "\" y=\"" << fmt(kTop + 16)
       << "\" font-size=\"11\" text-anchor=\"end\">" << escape(spec.note) << "</text>\n";
  os << "</svg>\n";
  return os.str();
}

void plot_series(const std::string& csv_in, const std::string& svg_out, const PlotSpec& spec) {
  write_text(svg_out, render_svg(read_csv(csv_in), spec));
}

}  // namespace mcf::cli
