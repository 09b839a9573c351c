#include "hsap/plot.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace hsap {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 25.0;
constexpr double kMarginTop = 25.0;
constexpr double kMarginBottom = 55.0;

const char* const kPalette[10] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                  "#9467bd", "#8c564b", "#e377c2", "#7f7f7f",
                                  "#bcbd22", "#17becf"};

std::string fmt_fixed(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string fmt_tick(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

struct Bounds {
  double lo = 0.0;
  double hi = 1.0;
};

Bounds padded_bounds(double lo, double hi) {
  if (!(hi > lo)) return {lo - 1.0, hi + 1.0};
  const double pad = 0.05 * (hi - lo);
  return {lo - pad, hi + pad};
}

double map_x(double v, const Bounds& b) {
  return kMarginLeft + (v - b.lo) / (b.hi - b.lo) * (kWidth - kMarginLeft - kMarginRight);
}

double map_y(double v, const Bounds& b) {
  return kHeight - kMarginBottom -
         (v - b.lo) / (b.hi - b.lo) * (kHeight - kMarginTop - kMarginBottom);
}

std::string svg_open() {
  return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\" font-family=\"monospace\" font-size=\"12\">\n"
         "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"#ffffff\"/>\n";
}

std::string frame_rect() {
  return "<rect x=\"" + fmt_fixed(kMarginLeft) + "\" y=\"" + fmt_fixed(kMarginTop) +
         "\" width=\"" + fmt_fixed(kWidth - kMarginLeft - kMarginRight) +
         "\" height=\"" + fmt_fixed(kHeight - kMarginTop - kMarginBottom) +
         "\" fill=\"none\" stroke=\"#333333\"/>\n";
}

}  // namespace

std::string render_line_svg(const std::vector<double>& x, const std::vector<double>& y,
                            const std::string& x_label, const std::string& y_label) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("render_line_svg: need matching nonempty series");

  const Bounds bx = padded_bounds(*std::min_element(x.begin(), x.end()),
                                  *std::max_element(x.begin(), x.end()));
  const Bounds by = padded_bounds(*std::min_element(y.begin(), y.end()),
                                  *std::max_element(y.begin(), y.end()));

  std::string svg = svg_open();
  svg += frame_rect();

  for (int i = 0; i <= 4; ++i) {
    const double fx = bx.lo + (bx.hi - bx.lo) * i / 4.0;
    const double fy = by.lo + (by.hi - by.lo) * i / 4.0;
    const double px = map_x(fx, bx);
    const double py = map_y(fy, by);
    svg += "<line x1=\"" + fmt_fixed(px) + "\" y1=\"" + fmt_fixed(kHeight - kMarginBottom) +
           "\" x2=\"" + fmt_fixed(px) + "\" y2=\"" +
           fmt_fixed(kHeight - kMarginBottom + 5) + "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + fmt_fixed(px) + "\" y=\"" + fmt_fixed(kHeight - kMarginBottom + 20) +
           "\" text-anchor=\"middle\">" + fmt_tick(fx) + "</text>\n";
    svg += "<line x1=\"" + fmt_fixed(kMarginLeft - 5) + "\" y1=\"" + fmt_fixed(py) +
           "\" x2=\"" + fmt_fixed(kMarginLeft) + "\" y2=\"" + fmt_fixed(py) +
           "\" stroke=\"#333333\"/>\n";
    svg += "<text x=\"" + fmt_fixed(kMarginLeft - 8) + "\" y=\"" + fmt_fixed(py + 4) +
           "\" text-anchor=\"end\">" + fmt_tick(fy) + "</text>\n";
  }

  svg += "<polyline fill=\"none\" stroke=\"" + std::string(kPalette[0]) +
         "\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) svg.push_back(' ');
    svg += fmt_fixed(map_x(x[i], bx)) + "," + fmt_fixed(map_y(y[i], by));
  }
  svg += "\"/>\n";

  svg += "<text x=\"" + fmt_fixed((kMarginLeft + kWidth - kMarginRight) / 2.0) +
         "\" y=\"" + fmt_fixed(kHeight - 12) + "\" text-anchor=\"middle\">" + x_label +
         "</text>\n";
  svg += "<text x=\"16\" y=\"" + fmt_fixed((kMarginTop + kHeight - kMarginBottom) / 2.0) +
         "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt_fixed((kMarginTop + kHeight - kMarginBottom) / 2.0) + ")\">" + y_label +
         "</text>\n";
  svg += "</svg>\n";
  return svg;
}

std::string render_scatter_svg(const Matrix& points, const std::vector<int>& labels) {
  if (points.rows() < 1 || (points.cols() != 2 && points.cols() != 3))
    throw std::invalid_argument("render_scatter_svg: need rows with 2 or 3 columns");
  if (!labels.empty() && static_cast<Index>(labels.size()) != points.rows())
    throw std::invalid_argument("render_scatter_svg: one label per row required");

  // Fixed orthographic view angle for 3-D input.
  constexpr double kPi = 3.141592653589793238462643383279502884;
  const double az = 30.0 * kPi / 180.0;
  const double el = 20.0 * kPi / 180.0;

  std::vector<double> u(static_cast<std::size_t>(points.rows()));
  std::vector<double> v(static_cast<std::size_t>(points.rows()));
  for (Index i = 0; i < points.rows(); ++i) {
    if (points.cols() == 2) {
      u[static_cast<std::size_t>(i)] = points(i, 0);
      v[static_cast<std::size_t>(i)] = points(i, 1);
    } else {
      const double x = points(i, 0);
      const double y = points(i, 1);
      const double z = points(i, 2);
      const double depth = x * std::sin(az) + y * std::cos(az);
      u[static_cast<std::size_t>(i)] = x * std::cos(az) - y * std::sin(az);
      v[static_cast<std::size_t>(i)] = z * std::cos(el) - depth * std::sin(el);
    }
  }

  const Bounds bu = padded_bounds(*std::min_element(u.begin(), u.end()),
                                  *std::max_element(u.begin(), u.end()));
  const Bounds bv = padded_bounds(*std::min_element(v.begin(), v.end()),
                                  *std::max_element(v.begin(), v.end()));

  int min_label = 0;
  if (!labels.empty()) min_label = *std::min_element(labels.begin(), labels.end());

  std::string svg = svg_open();
  svg += frame_rect();
  for (Index i = 0; i < points.rows(); ++i) {
    const char* color = kPalette[0];
    if (!labels.empty()) {
      const int shifted = labels[static_cast<std::size_t>(i)] - min_label;
      color = kPalette[((shifted % 10) + 10) % 10];
    }
    svg += "<circle cx=\"" + fmt_fixed(map_x(u[static_cast<std::size_t>(i)], bu)) +
           "\" cy=\"" + fmt_fixed(map_y(v[static_cast<std::size_t>(i)], bv)) +
           "\" r=\"3\" fill=\"" + color + "\" fill-opacity=\"0.75\"/>\n";
  }
  svg += "</svg>\n";
  return svg;
}

}  // namespace hsap
