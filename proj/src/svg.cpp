#include "obs_scout/reports.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace obs_scout {

namespace {

const char* kPalette[5] = {"#4477aa", "#ee6677", "#228833", "#ccbb44", "#aa3377"};
const char* kStateLabels[5] = {"p1", "p2", "theta", "c1", "c2"};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string eigenvector_svg(const EigenReport& eig) {
  const double width = 640, height = 360;
  const double left = 50, bottom = height - 40, plot_h = 260;
  const double group_w = (width - left - 20) / 5.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">"
      << "Normalized eigenvector components by eigenvalue (descending)</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << width - 20 << "\" y2=\""
      << bottom << "\" stroke=\"black\"/>\n";
  for (int j = 0; j < 5; ++j) {  // one group per eigenvector
    const double gx = left + j * group_w + 8;
    Vec5 v = eig.eigenvectors.col(j);
    v /= std::max(v.norm(), 1e-300);
    for (int s = 0; s < 5; ++s) {
      const double mag = std::abs(v[s]);
      const double bar_w = (group_w - 16) / 5.0;
      const double h = mag * plot_h;
      svg << "<rect x=\"" << num(gx + s * bar_w) << "\" y=\"" << num(bottom - h) << "\" width=\""
          << num(bar_w - 2) << "\" height=\"" << num(h) << "\" fill=\"" << kPalette[s]
          << "\"/>\n";
    }
    svg << "<text x=\"" << num(gx + (group_w - 16) / 2) << "\" y=\"" << num(bottom + 16)
        << "\" text-anchor=\"middle\" font-size=\"12\">lambda_" << j + 1 << " = "
        << num(eig.eigenvalues[j]) << "</text>\n";
  }
  for (int s = 0; s < 5; ++s) {  // legend
    const double lx = left + s * 90;
    svg << "<rect x=\"" << num(lx) << "\" y=\"" << num(height - 24) << "\" width=\"12\" height=\"12\" fill=\""
        << kPalette[s] << "\"/>\n";
    svg << "<text x=\"" << num(lx + 16) << "\" y=\"" << num(height - 13)
        << "\" font-size=\"12\">" << kStateLabels[s] << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

namespace {

std::string polyline(const std::vector<double>& t, const std::vector<double>& y, double t_max,
                     double y_max, double x0, double y0, double w, double h, const char* color,
                     bool dashed) {
  std::ostringstream line;
  line << "<polyline fill=\"none\" stroke=\"" << color << "\"";
  if (dashed) line << " stroke-dasharray=\"4 3\"";
  line << " points=\"";
  const std::size_t stride = std::max<std::size_t>(1, t.size() / 400);
  for (std::size_t i = 0; i < t.size(); i += stride) {
    const double px = x0 + (t[i] / t_max) * w;
    const double py = y0 + h - std::min(y[i] / y_max, 1.0) * h;
    line << num(px) << "," << num(py) << " ";
  }
  line << "\"/>\n";
  return line.str();
}

}  // namespace

std::string ekf_traces_svg(const TrialResult& trial, const std::vector<SensorSpec>& sensors) {
  const double width = 720, height = 5 * 110 + 60;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"18\" text-anchor=\"middle\" font-size=\"14\">"
      << "Absolute error (solid) and covariance std (dashed) per state</text>\n";
  const double t_max = std::max(trial.times.back(), 1e-9);
  for (int s = 0; s < 5; ++s) {
    const double panel_y = 30 + s * 110;
    const double x0 = 60, w = width - 80, h = 88;
    std::vector<double> err(trial.times.size()), dev(trial.times.size());
    double y_max = 1e-12;
    for (std::size_t i = 0; i < trial.times.size(); ++i) {
      err[i] = std::abs(trial.error[i][s]);
      dev[i] = std::sqrt(std::max(trial.cov_diagonal[i][s], 0.0));
      y_max = std::max({y_max, err[i], dev[i]});
    }
    svg << "<rect x=\"" << x0 << "\" y=\"" << panel_y << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"#999\"/>\n";
    svg << "<text x=\"8\" y=\"" << panel_y + h / 2 << "\" font-size=\"12\">" << kStateLabels[s]
        << "</text>\n";
    svg << "<text x=\"" << x0 + w + 4 << "\" y=\"" << panel_y + 12 << "\" font-size=\"10\">"
        << num(y_max) << "</text>\n";
    svg << polyline(trial.times, err, t_max, y_max, x0, panel_y, w, h, kPalette[0], false);
    svg << polyline(trial.times, dev, t_max, y_max, x0, panel_y, w, h, kPalette[1], true);
  }
  // active-sensor markers along the bottom strip
  const double strip_y = height - 22;
  svg << "<text x=\"8\" y=\"" << strip_y + 10 << "\" font-size=\"12\">sensor</text>\n";
  const std::size_t stride = std::max<std::size_t>(1, trial.times.size() / 400);
  for (std::size_t i = 0; i < trial.times.size(); i += stride) {
    if (trial.active_sensor[i] == kNoSensor) continue;
    const double px = 60 + trial.times[i] / t_max * (width - 80);
    svg << "<circle cx=\"" << num(px) << "\" cy=\"" << strip_y + 6 << "\" r=\"2\" fill=\""
        << kPalette[trial.active_sensor[i] % 5] << "\"/>\n";
  }
  double lx = 150;
  for (std::size_t s = 0; s < sensors.size(); ++s) {
    svg << "<circle cx=\"" << num(lx) << "\" cy=\"" << strip_y + 6 << "\" r=\"3\" fill=\""
        << kPalette[s % 5] << "\"/>\n";
    svg << "<text x=\"" << num(lx + 8) << "\" y=\"" << strip_y + 10 << "\" font-size=\"11\">"
        << sensors[s].id << "</text>\n";
    lx += 90;
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace obs_scout
