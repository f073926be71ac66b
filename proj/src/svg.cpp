#include "laban/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace laban {

namespace {

constexpr double kWidth = 720, kHeight = 420;
constexpr double kLeft = 70, kRight = 170, kTop = 40, kBottom = 60;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                                    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;
};

Range pad(double lo, double hi) {
  if (!(lo <= hi)) return {0.0, 1.0};
  if (hi - lo < 1e-12) return {lo - 0.5, hi + 0.5};
  return {lo, hi};
}

class Canvas {
 public:
  Canvas(Range x, Range y, const ChartLabels& labels) : x_(x), y_(y) {
    out_ << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
         << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out_ << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out_ << "<text class=\"title\" x=\"" << (kLeft + plot_w() / 2) << "\" y=\"22\" text-anchor=\"middle\" "
         << "font-size=\"14\">" << escape(labels.title) << "</text>\n";
    out_ << "<g class=\"axes\" stroke=\"black\">\n";
    out_ << "<line x1=\"" << kLeft << "\" y1=\"" << (kTop + plot_h()) << "\" x2=\"" << (kLeft + plot_w())
         << "\" y2=\"" << (kTop + plot_h()) << "\"/>\n";
    out_ << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << (kTop + plot_h())
         << "\"/>\n</g>\n";
    out_ << "<text class=\"x-label\" x=\"" << (kLeft + plot_w() / 2) << "\" y=\"" << (kHeight - 15)
         << "\" text-anchor=\"middle\">" << escape(labels.x_label) << "</text>\n";
    out_ << "<text class=\"y-label\" transform=\"translate(18," << (kTop + plot_h() / 2)
         << ") rotate(-90)\" text-anchor=\"middle\">" << escape(labels.y_label) << "</text>\n";
    for (int i = 0; i <= 4; ++i) {
      const double v = y_.lo + (y_.hi - y_.lo) * i / 4.0;
      out_ << "<text class=\"y-tick\" x=\"" << (kLeft - 6) << "\" y=\"" << num(py(v) + 4)
           << "\" text-anchor=\"end\">" << num(v) << "</text>\n";
    }
  }

  double plot_w() const { return kWidth - kLeft - kRight; }
  double plot_h() const { return kHeight - kTop - kBottom; }
  double px(double v) const { return kLeft + (v - x_.lo) / (x_.hi - x_.lo) * plot_w(); }
  double py(double v) const { return kTop + plot_h() - (v - y_.lo) / (y_.hi - y_.lo) * plot_h(); }

  void x_ticks() {
    for (int i = 0; i <= 4; ++i) {
      const double v = x_.lo + (x_.hi - x_.lo) * i / 4.0;
      out_ << "<text class=\"x-tick\" x=\"" << num(px(v)) << "\" y=\"" << (kTop + plot_h() + 16)
           << "\" text-anchor=\"middle\">" << num(v) << "</text>\n";
    }
  }

  void legend(std::size_t i, const std::string& name) {
    const double y = kTop + 14.0 * static_cast<double>(i);
    out_ << "<g class=\"legend\"><rect x=\"" << (kWidth - kRight + 12) << "\" y=\"" << (y - 8)
         << "\" width=\"10\" height=\"10\" fill=\"" << kPalette[i % 10] << "\"/><text x=\""
         << (kWidth - kRight + 26) << "\" y=\"" << y << "\">" << escape(name) << "</text></g>\n";
  }

  std::ostringstream& out() { return out_; }
  std::string finish() {
    out_ << "</svg>\n";
    return out_.str();
  }

 private:
  Range x_, y_;
  std::ostringstream out_;
};

}  // namespace

std::string line_chart(const std::vector<Series>& series, const ChartLabels& labels) {
  double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo, ylo = xlo, yhi = -xlo;
  for (const auto& s : series) {
    for (double v : s.x) xlo = std::min(xlo, v), xhi = std::max(xhi, v);
    for (double v : s.y) ylo = std::min(ylo, v), yhi = std::max(yhi, v);
  }
  Canvas c(pad(xlo, xhi), pad(std::min(ylo, 0.0), yhi), labels);
  c.x_ticks();
  for (std::size_t i = 0; i < series.size(); ++i) {
    const auto& s = series[i];
    c.out() << "<polyline class=\"series\" data-name=\"" << escape(s.name) << "\" fill=\"none\" stroke=\""
            << kPalette[i % 10] << "\" stroke-width=\"1.5\" points=\"";
    const std::size_t n = std::min(s.x.size(), s.y.size());
    for (std::size_t k = 0; k < n; ++k) {
      c.out() << (k ? " " : "") << num(c.px(s.x[k])) << ',' << num(c.py(s.y[k]));
    }
    c.out() << "\"/>\n";
    c.legend(i, s.name);
  }
  return c.finish();
}

std::string bar_chart(const std::vector<std::string>& names, const std::vector<double>& values,
                      const ChartLabels& labels) {
  double hi = 0.0, lo = 0.0;
  for (double v : values) hi = std::max(hi, v), lo = std::min(lo, v);
  const double n = static_cast<double>(std::max<std::size_t>(values.size(), 1));
  Canvas c({0.0, n}, pad(lo, hi), labels);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double x0 = c.px(static_cast<double>(i) + 0.1), x1 = c.px(static_cast<double>(i) + 0.9);
    const double y0 = c.py(std::max(values[i], 0.0)), y1 = c.py(std::min(values[i], 0.0));
    c.out() << "<rect class=\"bar\" data-name=\"" << escape(i < names.size() ? names[i] : "") << "\" x=\""
            << num(x0) << "\" y=\"" << num(y0) << "\" width=\"" << num(x1 - x0) << "\" height=\"" << num(y1 - y0)
            << "\" fill=\"" << kPalette[0] << "\"/>\n";
    c.out() << "<text class=\"x-tick\" transform=\"translate(" << num((x0 + x1) / 2) << ','
            << (kTop + c.plot_h() + 12) << ") rotate(30)\">" << escape(i < names.size() ? names[i] : "")
            << "</text>\n";
  }
  return c.finish();
}

}  // namespace laban
