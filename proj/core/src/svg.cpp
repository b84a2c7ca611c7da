#include "bvarx/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace bvarx::svg {
namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

struct Axis {
  double lo = 0.0, hi = 1.0;
  void include(double v) {
    if (!std::isfinite(v)) return;
    if (!seen) {
      lo = hi = v;
      seen = true;
    }
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void finish() {
    if (!seen) lo = 0.0, hi = 1.0;
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  bool seen = false;
};

constexpr double kLeft = 64, kRight = 16, kTop = 32, kBottom = 44;

std::string header(const Frame& f) {
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(f.width) << "\" height=\"" << num(f.height)
    << "\" viewBox=\"0 0 " << num(f.width) << ' ' << num(f.height) << "\" font-family=\"sans-serif\" font-size=\"11\">\n"
    << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!f.title.empty())
    o << "<text x=\"" << num(f.width / 2) << "\" y=\"18\" text-anchor=\"middle\" font-size=\"13\">" << escape(f.title)
      << "</text>\n";
  return o.str();
}

}  // namespace

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

std::string line_chart(const Frame& f, const std::vector<Series>& series, const std::vector<Band>& bands) {
  Axis ax, ay;
  for (const auto& s : series) {
    for (double v : s.x) ax.include(v);
    for (double v : s.y) ay.include(v);
  }
  for (const auto& b : bands) {
    for (double v : b.x) ax.include(v);
    for (double v : b.lo) ay.include(v);
    for (double v : b.hi) ay.include(v);
  }
  ax.finish();
  ay.finish();
  const double pw = f.width - kLeft - kRight, ph = f.height - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - ax.lo) / (ax.hi - ax.lo) * pw; };
  auto py = [&](double v) { return kTop + (1.0 - (v - ay.lo) / (ay.hi - ay.lo)) * ph; };

  std::ostringstream o;
  o << header(f);
  o << "<rect x=\"" << num(kLeft) << "\" y=\"" << num(kTop) << "\" width=\"" << num(pw) << "\" height=\"" << num(ph)
    << "\" fill=\"none\" stroke=\"#444\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double vx = ax.lo + (ax.hi - ax.lo) * i / 4.0;
    const double vy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
    o << "<text x=\"" << num(px(vx)) << "\" y=\"" << num(kTop + ph + 14) << "\" text-anchor=\"middle\">" << tick(vx)
      << "</text>\n";
    o << "<text x=\"" << num(kLeft - 4) << "\" y=\"" << num(py(vy) + 4) << "\" text-anchor=\"end\">" << tick(vy)
      << "</text>\n";
  }
  if (ay.lo < 0.0 && ay.hi > 0.0)
    o << "<line x1=\"" << num(kLeft) << "\" x2=\"" << num(kLeft + pw) << "\" y1=\"" << num(py(0)) << "\" y2=\""
      << num(py(0)) << "\" stroke=\"#999\" stroke-dasharray=\"2,2\"/>\n";
  for (const auto& b : bands) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < b.x.size(); ++i)
      if (std::isfinite(b.hi[i])) pts << num(px(b.x[i])) << ',' << num(py(b.hi[i])) << ' ';
    for (std::size_t i = b.x.size(); i-- > 0;)
      if (std::isfinite(b.lo[i])) pts << num(px(b.x[i])) << ',' << num(py(b.lo[i])) << ' ';
    o << "<polygon points=\"" << pts.str() << "\" fill=\"" << b.color << "\" fill-opacity=\"0.5\" stroke=\"none\"/>\n";
  }
  double legend_y = kTop + 12;
  for (const auto& s : series) {
    std::ostringstream pts;
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i)
      if (std::isfinite(s.x[i]) && std::isfinite(s.y[i])) pts << num(px(s.x[i])) << ',' << num(py(s.y[i])) << ' ';
    o << "<polyline points=\"" << pts.str() << "\" fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.5\""
      << (s.dashed ? " stroke-dasharray=\"5,3\"" : "") << "/>\n";
    if (!s.label.empty()) {
      o << "<text x=\"" << num(kLeft + pw - 6) << "\" y=\"" << num(legend_y) << "\" text-anchor=\"end\" fill=\""
        << s.color << "\">" << escape(s.label) << "</text>\n";
      legend_y += 13;
    }
  }
  if (!f.xlabel.empty())
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(f.height - 8) << "\" text-anchor=\"middle\">"
      << escape(f.xlabel) << "</text>\n";
  if (!f.ylabel.empty())
    o << "<text x=\"14\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(kTop + ph / 2) << ")\">" << escape(f.ylabel) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string heatmap(const Frame& f, const Eigen::MatrixXd& values, const std::vector<double>& periods,
                    const Eigen::MatrixXd* phase, const BoolField* outline, const BoolField* shade, int arrow_step) {
  const Eigen::Index ns = values.rows(), nt = values.cols();
  const double pw = f.width - kLeft - kRight, ph = f.height - kTop - kBottom;
  const double cw = nt > 0 ? pw / static_cast<double>(nt) : pw;
  const double ch = ns > 0 ? ph / static_cast<double>(ns) : ph;
  std::ostringstream o;
  o << header(f);
  // Small scales at the top, as is customary for scalograms.
  for (Eigen::Index s = 0; s < ns; ++s) {
    for (Eigen::Index t = 0; t < nt; ++t) {
      const double v = std::isfinite(values(s, t)) ? std::clamp(values(s, t), 0.0, 1.0) : 0.0;
      const int r = static_cast<int>(std::lround(255 * v));
      const int b = static_cast<int>(std::lround(255 * (1.0 - v)));
      const bool faded = shade && (*shade)(s, t);
      o << "<rect x=\"" << num(kLeft + t * cw) << "\" y=\"" << num(kTop + s * ch) << "\" width=\"" << num(cw + 0.05)
        << "\" height=\"" << num(ch + 0.05) << "\" fill=\"rgb(" << r << ",64," << b << ")\""
        << (faded ? " fill-opacity=\"0.35\"" : "") << "/>\n";
    }
  }
  if (outline) {
    for (Eigen::Index s = 0; s < ns; ++s)
      for (Eigen::Index t = 0; t < nt; ++t)
        if ((*outline)(s, t))
          o << "<rect x=\"" << num(kLeft + t * cw) << "\" y=\"" << num(kTop + s * ch) << "\" width=\"" << num(cw)
            << "\" height=\"" << num(ch) << "\" fill=\"none\" stroke=\"black\" stroke-width=\"0.4\"/>\n";
  }
  if (phase && arrow_step > 0) {
    const double len = std::min(cw, ch) * arrow_step * 0.4;
    for (Eigen::Index s = arrow_step / 2; s < ns; s += arrow_step)
      for (Eigen::Index t = arrow_step / 2; t < nt; t += arrow_step) {
        const double a = (*phase)(s, t);
        if (!std::isfinite(a) || (shade && (*shade)(s, t))) continue;
        const double cx = kLeft + (t + 0.5) * cw, cy = kTop + (s + 0.5) * ch;
        // Rightward = in phase; upward = +pi/2.
        const double dx = len * std::cos(a), dy = -len * std::sin(a);
        o << "<line x1=\"" << num(cx - dx / 2) << "\" y1=\"" << num(cy - dy / 2) << "\" x2=\"" << num(cx + dx / 2)
          << "\" y2=\"" << num(cy + dy / 2) << "\" stroke=\"black\" stroke-width=\"1\"/>\n"
          << "<circle cx=\"" << num(cx + dx / 2) << "\" cy=\"" << num(cy + dy / 2)
          << "\" r=\"1.5\" fill=\"black\"/>\n";
      }
  }
  for (int i = 0; i <= 4 && ns > 0; ++i) {
    const auto s = static_cast<Eigen::Index>(std::lround((ns - 1) * i / 4.0));
    o << "<text x=\"" << num(kLeft - 4) << "\" y=\"" << num(kTop + (s + 0.5) * ch + 4) << "\" text-anchor=\"end\">"
      << tick(periods[static_cast<std::size_t>(s)]) << "</text>\n";
  }
  for (int i = 0; i <= 4 && nt > 0; ++i) {
    const auto t = static_cast<Eigen::Index>(std::lround((nt - 1) * i / 4.0));
    o << "<text x=\"" << num(kLeft + (t + 0.5) * cw) << "\" y=\"" << num(kTop + ph + 14)
      << "\" text-anchor=\"middle\">" << t << "</text>\n";
  }
  if (!f.xlabel.empty())
    o << "<text x=\"" << num(kLeft + pw / 2) << "\" y=\"" << num(f.height - 8) << "\" text-anchor=\"middle\">"
      << escape(f.xlabel) << "</text>\n";
  if (!f.ylabel.empty())
    o << "<text x=\"14\" y=\"" << num(kTop + ph / 2) << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
      << num(kTop + ph / 2) << ")\">" << escape(f.ylabel) << "</text>\n";
  o << "</svg>\n";
  return o.str();
}

std::string grid(const std::vector<std::string>& panels, int cols, double cell_width, double cell_height,
                 const std::string& title) {
  cols = std::max(1, cols);
  const auto n = static_cast<int>(panels.size());
  const int rows = (n + cols - 1) / cols;
  const double top = title.empty() ? 0.0 : 24.0;
  Frame f{cell_width * cols, cell_height * rows + top, title, {}, {}};
  std::ostringstream o;
  o << header(f);
  for (int i = 0; i < n; ++i) {
    std::string body = panels[static_cast<std::size_t>(i)];
    // Nest the panel as an inner <svg> positioned in its cell.
    const auto pos = body.find("<svg ");
    if (pos != std::string::npos)
      body.insert(pos + 5, "x=\"" + num((i % cols) * cell_width) + "\" y=\"" + num(top + (i / cols) * cell_height) +
                               "\" ");
    o << body;
  }
  o << "</svg>\n";
  return o.str();
}

}  // namespace bvarx::svg
