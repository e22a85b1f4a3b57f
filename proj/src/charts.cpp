#include "botrf/charts.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "botrf/errors.hpp"
#include "botrf/report.hpp"
#include "botrf/svg.hpp"

namespace botrf::charts {

const char* role_name(SeriesRole role) noexcept {
  switch (role) {
    case SeriesRole::LineOfSight: return "los";
    case SeriesRole::FresnelLower: return "fresnel_lower";
    case SeriesRole::Terrain: return "terrain";
    case SeriesRole::EarthCurvature: return "earth_curvature";
    case SeriesRole::Level: return "level";
    case SeriesRole::Sensitivity: return "sensitivity";
  }
  return "";
}

namespace {

double nice_step(double span, int target) {
  const double raw = span / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  double f = 10.0;
  if (r <= 1.0) f = 1.0;
  else if (r <= 2.0) f = 2.0;
  else if (r <= 5.0) f = 5.0;
  return f * mag;
}

std::string tick_label(double v, double step) {
  int decimals = 0;
  if (step < 1.0) decimals = static_cast<int>(std::ceil(-std::log10(step) - 1e-9));
  if (std::fabs(v) < step * 1e-9) v = 0.0;
  return fmt::format("{:.{}f}", v, decimals);
}

struct Plot {
  double left, top, width, height;
  Axis x, y;

  double px(double v) const { return left + (v - x.min) / (x.max - x.min) * width; }
  double py(double v) const { return top + height - (v - y.min) / (y.max - y.min) * height; }
};

}  // namespace

Axis make_axis(double data_min, double data_max) {
  if (!std::isfinite(data_min) || !std::isfinite(data_max)) throw DomainError("chart axis range is not finite");
  if (data_min > data_max) std::swap(data_min, data_max);
  double span = data_max - data_min;
  const double pad = span > 0.0 ? 0.05 * span : std::max(1.0, 0.05 * std::fabs(data_min));
  Axis a{data_min - pad, data_max + pad, {}};
  const double step = nice_step(a.max - a.min, 6);
  for (double t = std::ceil(a.min / step) * step; t <= a.max + step * 1e-9; t += step) a.ticks.push_back(t);
  return a;
}

ChartSpec profile_chart_spec(const TerrainProfile& p, const profile::ClearanceVerdict& verdict) {
  if (p.size() == 0) throw DomainError("profile is empty");
  ChartSpec spec;
  spec.kind = ChartKind::Profile;
  spec.title = fmt::format("Terrain profile between {} and {}", p.geometry.tx.name, p.geometry.rx.name);
  spec.x_label = "Distance (km)";
  spec.y_label = "Elevation (m)";

  // Flat-terrain frame: ground as sampled, the ray lowered by the earth bulge.
  const std::size_t n = p.size();
  Series los{"Line of sight", SeriesRole::LineOfSight, kBlue, p.distance_km, {}};
  Series fresnel{"First Fresnel zone (lower)", SeriesRole::FresnelLower, kMagenta, p.distance_km, {}};
  Series terrain{"Terrain", SeriesRole::Terrain, kGreen, p.distance_km, p.terrain_m};
  Series earth{"Earth curvature", SeriesRole::EarthCurvature, kBrown, p.distance_km, {}};
  const double base = *std::min_element(p.terrain_m.begin(), p.terrain_m.end());
  los.y.resize(n);
  fresnel.y.resize(n);
  earth.y.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    los.y[i] = p.los_m[i] - p.bulge_m[i];
    fresnel.y[i] = los.y[i] - p.fresnel1_m[i];
    earth.y[i] = base - p.bulge_m[i];
  }
  spec.series = {std::move(los), std::move(fresnel), std::move(terrain), std::move(earth)};

  if (verdict.worst_index < n) {
    const std::size_t i = verdict.worst_index;
    spec.annotations.push_back({p.distance_km[i], p.terrain_m[i],
                                fmt::format("worst clearance {:.2f} F1 at {:.2f} km", verdict.worst_fraction,
                                            verdict.worst_distance_km)});
  }
  spec.notes.push_back(fmt::format("{:.0f} MHz, K = {:.2f}, {}", p.geometry.frequency_mhz, p.geometry.k_factor,
                                   profile::clearance_class_name(verdict.cls)));
  return spec;
}

ChartSpec power_chart_spec(const std::vector<PowerSample>& series, const LinkBudget& budget) {
  if (series.empty()) throw DomainError("power series is empty");
  ChartSpec spec;
  spec.kind = ChartKind::Power;
  spec.title = "Power versus distance along the link";
  spec.x_label = "Distance (km)";
  spec.y_label = "Level (dBm)";
  Series level{"Received level", SeriesRole::Level, kBlue, {}, {}};
  for (const auto& s : series) {
    level.x.push_back(s.distance_km);
    level.y.push_back(s.level_dbm);
  }
  const double sens = budget.rx_power_dbm - budget.margin_db;
  Series sensitivity{"Receiver sensitivity", SeriesRole::Sensitivity, kRed,
                     {series.front().distance_km, series.back().distance_km}, {sens, sens}, true};
  spec.series = {std::move(level), std::move(sensitivity)};
  spec.annotations.push_back({series.back().distance_km, series.back().level_dbm,
                              fmt::format("{:.2f} dBm", budget.rx_power_dbm)});
  spec.notes.push_back(fmt::format("EIRP: {:.2f} dBm", budget.eirp_dbm));
  spec.notes.push_back(fmt::format("Rx power: {:.2f} dBm", round_to(budget.rx_power_dbm, 2)));
  spec.notes.push_back(fmt::format("Link margin: {:.0f} dB ({:.2f} dB)", round_to(budget.margin_db, 0),
                                   round_to(budget.margin_db, 2)));
  return spec;
}

std::string render_svg(const ChartSpec& spec) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin, ymin = xmin, ymax = -xmin;
  for (const auto& s : spec.series) {
    for (double v : s.x) { xmin = std::min(xmin, v); xmax = std::max(xmax, v); }
    for (double v : s.y) { ymin = std::min(ymin, v); ymax = std::max(ymax, v); }
  }
  for (const auto& a : spec.annotations) {
    xmin = std::min(xmin, a.x); xmax = std::max(xmax, a.x);
    ymin = std::min(ymin, a.y); ymax = std::max(ymax, a.y);
  }
  if (!std::isfinite(xmin)) throw DomainError("chart has no data");

  const double margin_left = 70, margin_right = 20, margin_top = 40, margin_bottom = 110;
  Plot plot{margin_left, margin_top, spec.width_px - margin_left - margin_right,
            spec.height_px - margin_top - margin_bottom, make_axis(xmin, xmax), make_axis(ymin, ymax)};

  svg::Document doc(spec.width_px, spec.height_px);
  doc.rect(0, 0, spec.width_px, spec.height_px, "#ffffff");
  doc.text(spec.width_px / 2.0, 24, spec.title, 16, "middle", "#000000", true);

  doc.begin_group("axes");
  doc.rect(plot.left, plot.top, plot.width, plot.height, "none", "#000000");
  const double xstep = plot.x.ticks.size() > 1 ? plot.x.ticks[1] - plot.x.ticks[0] : 1.0;
  const double ystep = plot.y.ticks.size() > 1 ? plot.y.ticks[1] - plot.y.ticks[0] : 1.0;
  for (double t : plot.x.ticks) {
    const double x = plot.px(t);
    doc.line(x, plot.top, x, plot.top + plot.height, "#dddddd", 0.5);
    doc.text(x, plot.top + plot.height + 16, tick_label(t, xstep), 11, "middle");
  }
  for (double t : plot.y.ticks) {
    const double y = plot.py(t);
    doc.line(plot.left, y, plot.left + plot.width, y, "#dddddd", 0.5);
    doc.text(plot.left - 6, y + 4, tick_label(t, ystep), 11, "end");
  }
  doc.text(plot.left + plot.width / 2, plot.top + plot.height + 34, spec.x_label, 12, "middle");
  doc.text(18, plot.top + plot.height / 2, spec.y_label, 12, "middle", "#000000", false, -90.0);
  doc.end_group();

  for (const auto& s : spec.series) {
    doc.begin_group(std::string("series-") + role_name(s.role), "series");
    std::vector<svg::Point> pts;
    pts.reserve(s.x.size());
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) pts.push_back({plot.px(s.x[i]), plot.py(s.y[i])});
    doc.polyline(pts, s.color, 1.5, s.dashed ? "6,4" : "");
    doc.end_group();
  }

  if (!spec.annotations.empty()) {
    doc.begin_group("annotations");
    for (const auto& a : spec.annotations) {
      const double x = plot.px(a.x), y = plot.py(a.y);
      doc.circle(x, y, 4, "#ff0000", "#000000");
      const bool right_half = x > plot.left + plot.width / 2;
      doc.text(right_half ? x - 8 : x + 8, y - 8, a.label, 11, right_half ? "end" : "start");
    }
    doc.end_group();
  }

  doc.begin_group("legend");
  double lx = plot.left;
  const double ly = plot.top + plot.height + 58;
  for (const auto& s : spec.series) {
    doc.begin_group(std::string("legend-") + role_name(s.role), "legend-entry");
    doc.line(lx, ly - 4, lx + 24, ly - 4, s.color, 2.0, s.dashed ? "6,4" : "");
    doc.text(lx + 30, ly, s.name, 11);
    doc.end_group();
    lx += 40 + 7.0 * static_cast<double>(s.name.size());
  }
  doc.end_group();

  if (!spec.notes.empty()) {
    doc.begin_group("notes");
    double ny = plot.top + plot.height + 80;
    double nx = plot.left;
    for (const auto& n : spec.notes) {
      doc.text(nx, ny, n, 12);
      nx += 30 + 7.0 * static_cast<double>(n.size());
    }
    doc.end_group();
  }
  return doc.str();
}

std::string render_profile_chart(const TerrainProfile& p, const profile::ClearanceVerdict& verdict) {
  return render_svg(profile_chart_spec(p, verdict));
}

std::string render_power_chart(const std::vector<PowerSample>& series, const LinkBudget& budget) {
  return render_svg(power_chart_spec(series, budget));
}

}  // namespace botrf::charts
