#include "botrf/profile.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "botrf/errors.hpp"
#include "botrf/kernels.hpp"
#include "botrf/units.hpp"

namespace botrf {

ProfilePoint TerrainProfile::point(std::size_t i) const {
  return {distance_km[i], terrain_m[i], bulge_m[i], los_m[i], fresnel1_m[i], clearance_fraction[i]};
}

std::vector<ProfilePoint> TerrainProfile::points() const {
  std::vector<ProfilePoint> out;
  out.reserve(size());
  for (std::size_t i = 0; i < size(); ++i) out.push_back(point(i));
  return out;
}

void LinkGeometry::validate() const {
  if (!(tx_antenna_agl_m > 0.0) || !(rx_antenna_agl_m > 0.0)) {
    throw ValidationError("antenna heights must be positive");
  }
  if (!(k_factor > 0.0) || !std::isfinite(k_factor)) throw ValidationError("K factor must be positive");
  if (!(frequency_mhz >= kMinFrequencyMhz && frequency_mhz <= kMaxFrequencyMhz)) {
    throw UnsupportedFrequencyError(
        fmt::format("frequency {} MHz is outside the supported band {}-{} MHz", frequency_mhz, kMinFrequencyMhz,
                    kMaxFrequencyMhz));
  }
  if (!geodesy::is_valid(tx.point) || !geodesy::is_valid(rx.point)) throw ValidationError("invalid site coordinates");
}

namespace profile {

double earth_bulge_m(double d1_km, double d2_km, double k_factor) {
  if (!(k_factor > 0.0)) throw DomainError("K factor must be positive");
  if (d1_km < 0.0 || d2_km < 0.0) throw DomainError("distances must be non-negative");
  return 1000.0 * d1_km * d2_km / (2.0 * k_factor * geodesy::kEarthRadiusKm);
}

double fresnel_radius_m(double d1_km, double d2_km, double frequency_mhz) {
  const double d1 = d1_km * 1000.0;
  const double d2 = d2_km * 1000.0;
  if (!(d1 + d2 > 0.0)) throw DomainError("path length must be positive");
  return std::sqrt(units::freq_to_wavelength(frequency_mhz) * d1 * d2 / (d1 + d2));
}

TerrainProfile evaluate_profile(const LinkGeometry& geom, double total_km, std::vector<double> terrain_m) {
  geom.validate();
  const std::size_t n = terrain_m.size();
  if (n < 3 || !(total_km > 0.0)) throw PathTooShortError("path too short: a profile needs at least 3 samples");

  TerrainProfile p;
  p.geometry = geom;
  p.total_km = total_km;
  p.sample_spacing_m = total_km * 1000.0 / static_cast<double>(n - 1);
  p.distance_km.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    p.distance_km[i] = total_km * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  p.distance_km.back() = total_km;
  p.terrain_m = std::move(terrain_m);
  p.bulge_m.resize(n);
  p.los_m.resize(n);
  p.fresnel1_m.resize(n);
  p.clearance_fraction.resize(n);

  kernels::profile_geometry(
      {
          .distance_km = p.distance_km,
          .terrain_m = p.terrain_m,
          .total_km = total_km,
          .k_factor = geom.k_factor,
          .wavelength_m = units::freq_to_wavelength(geom.frequency_mhz),
          .los_start_m = p.terrain_m.front() + geom.tx_antenna_agl_m,
          .los_end_m = p.terrain_m.back() + geom.rx_antenna_agl_m,
      },
      {.bulge_m = p.bulge_m, .los_m = p.los_m, .fresnel1_m = p.fresnel1_m, .clearance_fraction = p.clearance_fraction});

  // Exact zeros at the ends regardless of rounding in (total - d).
  p.bulge_m.front() = p.bulge_m.back() = 0.0;
  p.fresnel1_m.front() = p.fresnel1_m.back() = 0.0;
  p.clearance_fraction.front() = p.clearance_fraction.back() = kEndpointClearance;
  return p;
}

TerrainProfile build_profile(const LinkGeometry& geom, const ElevationModel& dem, double spacing_m) {
  geom.validate();
  if (!(spacing_m >= 10.0 && spacing_m <= 1000.0)) throw DomainError("sample spacing must be within 10-1000 m");

  const double total_km = geodesy::distance_km(geom.tx.point, geom.rx.point);
  if (total_km * 1000.0 < 2.0 * spacing_m) {
    throw PathTooShortError(fmt::format("path too short: {:.0f} m between sites, need at least {:.0f} m",
                                        total_km * 1000.0, 2.0 * spacing_m));
  }
  const auto intervals = static_cast<std::size_t>(std::ceil(total_km * 1000.0 / spacing_m));
  std::vector<double> terrain(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(intervals);
    terrain[i] = dem.elevation_at(geodesy::point_at_fraction(geom.tx.point, geom.rx.point, t));
  }
  return evaluate_profile(geom, total_km, std::move(terrain));
}

std::string_view clearance_class_name(ClearanceClass c) noexcept {
  switch (c) {
    case ClearanceClass::Clear: return "CLEAR";
    case ClearanceClass::Partial: return "PARTIAL";
    case ClearanceClass::Grazing: return "GRAZING";
    case ClearanceClass::Obstructed: return "OBSTRUCTED";
  }
  return "?";
}

ClearanceClass classify(double fraction, const ClearanceThresholds& t) noexcept {
  if (fraction >= t.clear) return ClearanceClass::Clear;
  if (fraction >= t.partial) return ClearanceClass::Partial;
  if (fraction > t.grazing) return ClearanceClass::Grazing;
  return ClearanceClass::Obstructed;
}

ClearanceVerdict analyze_clearance(const TerrainProfile& p, const ClearanceThresholds& thresholds) {
  if (p.size() < 3) throw DomainError("clearance analysis needs at least 3 profile samples");
  const auto worst = kernels::arg_min(p.clearance_fraction, 1, p.size() - 1);
  return {
      .worst_fraction = worst.value,
      .worst_distance_km = p.distance_km[worst.index],
      .worst_index = worst.index,
      .cls = classify(worst.value, thresholds),
  };
}

PointingAngles pointing_angles_deg(const LinkGeometry& geom) {
  if (!geom.tx.ground_elevation_m || !geom.rx.ground_elevation_m) {
    throw ValidationError("pointing angles need the ground elevation of both sites");
  }
  const double d_m = geodesy::distance_km(geom.tx.point, geom.rx.point) * 1000.0;
  if (!(d_m > 0.0)) throw DomainError("pointing angles are undefined for coincident sites");
  const double tx_h = *geom.tx.ground_elevation_m + geom.tx_antenna_agl_m;
  const double rx_h = *geom.rx.ground_elevation_m + geom.rx_antenna_agl_m;
  const double curvature = d_m / (2.0 * geom.k_factor * geodesy::kEarthRadiusKm * 1000.0);
  constexpr double kToDeg = 180.0 / std::numbers::pi;
  return {
      .tx_elevation_deg = (std::atan((rx_h - tx_h) / d_m) - curvature) * kToDeg,
      .rx_elevation_deg = (std::atan((tx_h - rx_h) / d_m) - curvature) * kToDeg,
  };
}

}  // namespace profile
}  // namespace botrf
