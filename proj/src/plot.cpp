#include "vtrack/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace vtrack {

namespace {

constexpr double kWidth = 760.0;
constexpr double kHeight = 460.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 150.0;
constexpr double kTop = 70.0;
constexpr double kBottom = 60.0;
constexpr std::size_t kColumns = 1200;

constexpr std::array<const char*, 4> kColors{"#1f5fa8", "#c8402a", "#2b8a3e", "#7b4ba0"};

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  void add(double v) {
    if (!std::isfinite(v)) return;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void pad() {
    if (!std::isfinite(lo)) {
      lo = -1.0;
      hi = 1.0;
    }
    if (hi - lo < 1e-300 + 1e-12 * std::abs(hi)) {
      const double w = std::max(1.0, std::abs(hi)) * 0.5;
      lo -= w;
      hi += w;
    }
  }
};

std::vector<double> nice_ticks(double lo, double hi) {
  const double span = hi - lo;
  const double raw = span / 6.0;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  double step = mag;
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    step = m * mag;
    if (step >= raw) break;
  }
  std::vector<double> ticks;
  for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * span; t += step) {
    ticks.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
  }
  return ticks;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

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

// Keeps the first/last point and the min and max of every column of x.
std::vector<std::pair<double, double>> reduce(const PlotSeries& s, double x_lo, double x_hi,
                                              bool monotone_x) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t n = std::min(s.x.size(), s.y.size());
  if (!monotone_x || n <= 2 * kColumns) {
    const std::size_t stride = monotone_x ? 1 : std::max<std::size_t>(1, n / (4 * kColumns));
    for (std::size_t i = 0; i < n; i += stride) pts.emplace_back(s.x[i], s.y[i]);
    if (n && (n - 1) % stride) pts.emplace_back(s.x[n - 1], s.y[n - 1]);
    return pts;
  }
  const double w = (x_hi - x_lo) / kColumns;
  std::size_t i = 0;
  while (i < n) {
    const auto col = static_cast<long>((s.x[i] - x_lo) / w);
    std::size_t lo_i = i, hi_i = i, j = i;
    while (j < n && static_cast<long>((s.x[j] - x_lo) / w) == col) {
      if (s.y[j] < s.y[lo_i]) lo_i = j;
      if (s.y[j] > s.y[hi_i]) hi_i = j;
      ++j;
    }
    for (std::size_t k : {i, std::min(lo_i, hi_i), std::max(lo_i, hi_i), j - 1}) {
      if (pts.empty() || pts.back().first != s.x[k] || pts.back().second != s.y[k]) {
        pts.emplace_back(s.x[k], s.y[k]);
      }
    }
    i = j;
  }
  return pts;
}

}  // namespace

std::string render_svg(const PlotSpec& spec) {
  Range xr, yr;
  bool monotone = true;
  for (const auto& s : spec.series) {
    for (double v : s.x) xr.add(v);
    for (double v : s.y) yr.add(v);
    for (std::size_t i = 1; i < s.x.size(); ++i) monotone = monotone && s.x[i] >= s.x[i - 1];
  }
  xr.pad();
  yr.pad();
  const double pw = kWidth - kLeft - kRight;
  const double ph = kHeight - kTop - kBottom;
  if (spec.equal_aspect) {
    const double scale = 1.05 * std::max((xr.hi - xr.lo) / pw, (yr.hi - yr.lo) / ph);
    const double cx = 0.5 * (xr.lo + xr.hi), cy = 0.5 * (yr.lo + yr.hi);
    xr = {cx - 0.5 * scale * pw, cx + 0.5 * scale * pw};
    yr = {cy - 0.5 * scale * ph, cy + 0.5 * scale * ph};
  } else {
    const double m = 0.05 * (yr.hi - yr.lo);
    yr.lo -= m;
    yr.hi += m;
  }
  auto px = [&](double x) { return kLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kTop + (yr.hi - y) / (yr.hi - yr.lo) * ph; };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
     << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\" "
     << "font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
     << escape(spec.title) << "</text>\n";
  os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw << "\" height=\"" << ph
     << "\" fill=\"none\" stroke=\"black\"/>\n";

  for (double t : nice_ticks(xr.lo, xr.hi)) {
    os << "<line x1=\"" << px(t) << "\" y1=\"" << kTop << "\" x2=\"" << px(t) << "\" y2=\""
       << kTop + ph << "\" stroke=\"#e4e4e4\"/>\n";
    os << "<text x=\"" << px(t) << "\" y=\"" << kTop + ph + 16 << "\" text-anchor=\"middle\">"
       << fmt(t) << "</text>\n";
  }
  for (double t : nice_ticks(yr.lo, yr.hi)) {
    os << "<line x1=\"" << kLeft << "\" y1=\"" << py(t) << "\" x2=\"" << kLeft + pw << "\" y2=\""
       << py(t) << "\" stroke=\"#e4e4e4\"/>\n";
    os << "<text x=\"" << kLeft - 6 << "\" y=\"" << py(t) + 4 << "\" text-anchor=\"end\">"
       << fmt(t) << "</text>\n";
  }
  os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 18
     << "\" text-anchor=\"middle\">" << escape(spec.x_label) << "</text>\n";
  os << "<text transform=\"translate(18," << kTop + ph / 2
     << ") rotate(-90)\" text-anchor=\"middle\">" << escape(spec.y_label) << "</text>\n";

  if (spec.top_axis_divisor > 0.0) {
    const double k = spec.top_axis_divisor;
    for (double t : nice_ticks(xr.lo / k, xr.hi / k)) {
      os << "<line x1=\"" << px(t * k) << "\" y1=\"" << kTop << "\" x2=\"" << px(t * k)
         << "\" y2=\"" << kTop - 5 << "\" stroke=\"black\"/>\n";
      os << "<text x=\"" << px(t * k) << "\" y=\"" << kTop - 8 << "\" text-anchor=\"middle\">"
         << fmt(t) << "</text>\n";
    }
    os << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kTop - 26
       << "\" text-anchor=\"middle\" fill=\"#555\">" << escape(spec.top_label) << "</text>\n";
  }

  os << "<clipPath id=\"plot\"><rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
     << "\" height=\"" << ph << "\"/></clipPath>\n";
  for (std::size_t i = 0; i < spec.series.size(); ++i) {
    const auto pts = reduce(spec.series[i], xr.lo, xr.hi, monotone);
    const char* color = kColors[i % kColors.size()];
    os << "<polyline clip-path=\"url(#plot)\" fill=\"none\" stroke=\"" << color
       << "\" stroke-width=\"1.3\" points=\"";
    for (const auto& [x, y] : pts) {
      if (std::isfinite(x) && std::isfinite(y)) os << px(x) << ',' << py(y) << ' ';
    }
    os << "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << kLeft + pw + 34 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color
       << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << kLeft + pw + 40 << "\" y=\"" << ly << "\">"
       << escape(spec.series[i].label) << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::vector<std::filesystem::path> write_run_figures(const CsvTable& run,
                                                     const std::filesystem::path& dir) {
  const std::vector<double> s = run.column("s");
  const std::vector<double> t = run.column("t");
  double d = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (t[i] > 0.0) {
      d = s[i] / t[i];
      break;
    }
  }
  const std::string s_label = "scaled time s";
  const std::string t_label = "physical time t = s/d (s)";

  auto timeplot = [&](std::string title, std::string y_label,
                      std::vector<std::pair<std::string, std::string>> cols) {
    PlotSpec p;
    p.title = std::move(title);
    p.x_label = s_label;
    p.y_label = std::move(y_label);
    p.top_axis_divisor = d;
    p.top_label = t_label;
    for (auto& [col, label] : cols) p.series.push_back({label, s, run.column(col)});
    return p;
  };

  std::vector<std::pair<std::string, PlotSpec>> figures;
  {
    PlotSpec p;
    p.title = "Reference trajectory and the vessel";
    p.x_label = "x (m, same in normalized and physical units)";
    p.y_label = "y (m)";
    p.equal_aspect = true;
    p.series.push_back({"reference", run.column("x_re"), run.column("y_re")});
    p.series.push_back({"vessel", run.column("x"), run.column("y")});
    figures.emplace_back("fig1_trajectory.svg", std::move(p));
  }
  figures.emplace_back("fig2_position_errors.svg",
                       timeplot("Position errors (reference frame)", "error (m)",
                                {{"e_x", "e_x"}, {"e_y", "e_y"}}));
  figures.emplace_back("fig3_velocity_errors.svg",
                       timeplot("Velocity errors", "error (normalized)",
                                {{"e_u", "e_u"}, {"e_v", "e_v"}}));
  figures.emplace_back("fig4_heading_errors.svg",
                       timeplot("Heading and yaw-rate errors", "e_psi (rad), e_r (normalized)",
                                {{"e_psi", "e_psi"}, {"e_r", "e_r"}}));
  figures.emplace_back("fig5_tau1.svg",
                       timeplot("Surge force", "tau1 (normalized)", {{"tau1", "tau1"}}));
  figures.emplace_back("fig6_tau2.svg",
                       timeplot("Yaw moment", "tau2 (normalized)", {{"tau2", "tau2"}}));

  std::vector<std::filesystem::path> written;
  for (const auto& [name, spec] : figures) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary);
    out << render_svg(spec);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    written.push_back(path);
  }
  return written;
}

}  // namespace vtrack
