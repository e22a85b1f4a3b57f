#pragma once

namespace botrf {

// Latitude in [-90, 90], longitude in [-180, 180); west and south are negative.
struct GeoPoint {
  double lat_deg = 0.0;
  double lon_deg = 0.0;

  friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

namespace geodesy {

inline constexpr double kEarthRadiusKm = 6371.0088;

bool is_valid(const GeoPoint& p) noexcept;

// Validates and normalizes (lon 180 maps to -180). Throws ValidationError.
GeoPoint make_point(double lat_deg, double lon_deg);

// Great-circle distance on the mean-radius sphere. Exactly symmetric.
double distance_km(const GeoPoint& a, const GeoPoint& b);

// Forward azimuth at `a`, clockwise from true north, in [0, 360).
// Throws UndefinedAzimuthError for coincident points.
double initial_azimuth_deg(const GeoPoint& a, const GeoPoint& b);

// Point at fraction t of the great-circle arc from a to b.
GeoPoint point_at_fraction(const GeoPoint& a, const GeoPoint& b, double t);

}  // namespace geodesy
}  // namespace botrf
