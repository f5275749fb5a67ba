#include "lfcbf/scenario/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "lfcbf/errors.hpp"

namespace lfcbf::scenario {

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 420;
constexpr int kMarginL = 64;
constexpr int kMarginR = 16;
constexpr int kMarginT = 40;
constexpr int kMarginB = 48;

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                         "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

double nice_step(double span) {
  if (!(span > 0.0)) return 1.0;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (raw <= m * mag) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<Series>& series) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  double ymin = xmin, ymax = -xmin;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      xmin = std::min(xmin, s.x[i]);
      xmax = std::max(xmax, s.x[i]);
      ymin = std::min(ymin, s.y[i]);
      ymax = std::max(ymax, s.y[i]);
    }
  }
  if (!std::isfinite(xmin)) {
    xmin = 0;
    xmax = 1;
    ymin = 0;
    ymax = 1;
  }
  if (xmax - xmin < 1e-12) xmax = xmin + 1.0;
  if (ymax - ymin < 1e-12) {
    ymax += 0.5;
    ymin -= 0.5;
  } else {
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
  }

  const double pw = kWidth - kMarginL - kMarginR;
  const double ph = kHeight - kMarginT - kMarginB;
  auto X = [&](double x) { return kMarginL + (x - xmin) / (xmax - xmin) * pw; };
  auto Y = [&](double y) {
    return kMarginT + (1.0 - (y - ymin) / (ymax - ymin)) * ph;
  };

  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
      << kHeight << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-family=\"sans-serif\" font-size=\"15\">" << title
      << "</text>\n";

  // Grid and ticks.
  const double xs = nice_step(xmax - xmin);
  const double ys = nice_step(ymax - ymin);
  out << "<g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
  for (double x = std::ceil(xmin / xs) * xs; x <= xmax + 1e-9; x += xs) {
    out << "<line x1=\"" << X(x) << "\" y1=\"" << Y(ymin) << "\" x2=\"" << X(x)
        << "\" y2=\"" << Y(ymax) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << X(x) << "\" y=\"" << kHeight - kMarginB + 16
        << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  for (double y = std::ceil(ymin / ys) * ys; y <= ymax + 1e-9; y += ys) {
    out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(y) << "\" x2=\""
        << X(xmax) << "\" y2=\"" << Y(y) << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << kMarginL - 6 << "\" y=\"" << Y(y) + 4
        << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  out << "</g>\n";
  // Zero line when visible.
  if (ymin < 0.0 && ymax > 0.0) {
    out << "<line x1=\"" << X(xmin) << "\" y1=\"" << Y(0.0) << "\" x2=\""
        << X(xmax) << "\" y2=\"" << Y(0.0)
        << "\" stroke=\"#888\" stroke-dasharray=\"4 3\"/>\n";
  }
  // Axes.
  out << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\""
      << pw << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight - 10
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">"
      << x_label << "</text>\n";
  out << "<text x=\"16\" y=\"" << kHeight / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << kHeight / 2 << ")\">" << y_label << "</text>\n";

  // Data.
  for (std::size_t si = 0; si < series.size(); ++si) {
    const auto& s = series[si];
    const char* color = kColors[si % (sizeof(kColors) / sizeof(kColors[0]))];
    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.y[i])) continue;
      out << num(X(s.x[i])) << "," << num(Y(s.y[i])) << " ";
    }
    out << "\"/>\n";
    // Legend entry.
    const double lx = kMarginL + 12;
    const double ly = kMarginT + 14 + 16.0 * static_cast<double>(si);
    out << "<line x1=\"" << lx << "\" y1=\"" << ly << "\" x2=\"" << lx + 22
        << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << lx + 28 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.name
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace lfcbf::scenario
