#pragma once

#include <string>
#include <vector>

#include "botrf/linkbudget.hpp"
#include "botrf/profile.hpp"

namespace botrf::charts {

enum class ChartKind { Profile, Power };

enum class SeriesRole { LineOfSight, FresnelLower, Terrain, EarthCurvature, Level, Sensitivity };

const char* role_name(SeriesRole role) noexcept;

struct Series {
  std::string name;
  SeriesRole role;
  std::string color;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

struct Annotation {
  double x;
  double y;
  std::string label;
};

struct Axis {
  double min;
  double max;
  std::vector<double> ticks;
};

struct ChartSpec {
  ChartKind kind = ChartKind::Profile;
  int width_px = 900;
  int height_px = 500;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Annotation> annotations;
  std::vector<std::string> notes;
};

inline constexpr const char* kBlue = "#0000ff";
inline constexpr const char* kMagenta = "#ff00ff";
inline constexpr const char* kGreen = "#008000";
inline constexpr const char* kBrown = "#8b4513";
inline constexpr const char* kRed = "#d62728";

// Data range padded by at least 5% on each side, with 1-2-5 ticks inside.
Axis make_axis(double data_min, double data_max);

ChartSpec profile_chart_spec(const TerrainProfile& p, const profile::ClearanceVerdict& verdict);
ChartSpec power_chart_spec(const std::vector<PowerSample>& series, const LinkBudget& budget);

std::string render_svg(const ChartSpec& spec);

std::string render_profile_chart(const TerrainProfile& p, const profile::ClearanceVerdict& verdict);
std::string render_power_chart(const std::vector<PowerSample>& series, const LinkBudget& budget);

}  // namespace botrf::charts
