#pragma once

#include <cstddef>
#include <limits>
#include <string_view>
#include <vector>

#include "botrf/dem.hpp"
#include "botrf/site.hpp"

namespace botrf {

inline constexpr double kMinFrequencyMhz = 20.0;
inline constexpr double kMaxFrequencyMhz = 20000.0;
inline constexpr double kDefaultKFactor = 4.0 / 3.0;
inline constexpr double kDefaultSpacingM = 30.0;

struct LinkGeometry {
  Site tx;
  Site rx;
  double tx_antenna_agl_m = 10.0;
  double rx_antenna_agl_m = 10.0;
  double frequency_mhz = 5800.0;
  double k_factor = kDefaultKFactor;

  // Throws ValidationError / UnsupportedFrequencyError.
  void validate() const;
};

// Clearance sentinel for the two endpoints, where the Fresnel radius is zero.
inline constexpr double kEndpointClearance = std::numeric_limits<double>::infinity();

struct ProfilePoint {
  double distance_km;
  double terrain_m;
  double bulge_m;
  double los_m;
  double fresnel1_m;
  double clearance_fraction;
};

// Samples along the path, stored column-wise for the vector kernels.
struct TerrainProfile {
  LinkGeometry geometry;
  double total_km = 0.0;
  double sample_spacing_m = 0.0;
  std::vector<double> distance_km;
  std::vector<double> terrain_m;
  std::vector<double> bulge_m;
  std::vector<double> los_m;
  std::vector<double> fresnel1_m;
  std::vector<double> clearance_fraction;

  std::size_t size() const noexcept { return distance_km.size(); }
  ProfilePoint point(std::size_t i) const;
  std::vector<ProfilePoint> points() const;
};

namespace profile {

// Earth bulge in meters for distances in km: d1 d2 / (12.742 k).
double earth_bulge_m(double d1_km, double d2_km, double k_factor);

// First Fresnel radius in meters, distances in km.
double fresnel_radius_m(double d1_km, double d2_km, double frequency_mhz);

// Samples terrain every <= spacing_m along the great circle and evaluates the
// geometry. Throws PathTooShortError, MissingDataError, DomainError.
TerrainProfile build_profile(const LinkGeometry& geom, const ElevationModel& dem, double spacing_m = kDefaultSpacingM);

// Evaluates geometry over already-sampled, uniformly spaced terrain. The
// first and last samples are the tx and rx ground elevations.
TerrainProfile evaluate_profile(const LinkGeometry& geom, double total_km, std::vector<double> terrain_m);

enum class ClearanceClass { Clear, Partial, Grazing, Obstructed };

std::string_view clearance_class_name(ClearanceClass c) noexcept;

struct ClearanceThresholds {
  double clear = 0.6;      // fraction >= clear
  double partial = 0.1;    // partial <= fraction < clear
  double grazing = -0.1;   // grazing < fraction < partial
};

struct ClearanceVerdict {
  double worst_fraction = 0.0;
  double worst_distance_km = 0.0;
  std::size_t worst_index = 0;
  ClearanceClass cls = ClearanceClass::Clear;
};

ClearanceClass classify(double fraction, const ClearanceThresholds& thresholds = {}) noexcept;

// Throws DomainError for fewer than three samples.
ClearanceVerdict analyze_clearance(const TerrainProfile& p, const ClearanceThresholds& thresholds = {});

struct PointingAngles {
  double tx_elevation_deg;
  double rx_elevation_deg;
};

// Needs both sites' ground elevations; throws ValidationError otherwise.
PointingAngles pointing_angles_deg(const LinkGeometry& geom);

}  // namespace profile
}  // namespace botrf
