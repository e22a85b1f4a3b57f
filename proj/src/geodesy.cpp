#include "botrf/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>

#include "botrf/errors.hpp"

namespace botrf::geodesy {
namespace {

constexpr double kDeg = std::numbers::pi / 180.0;

struct Vec3 {
  double x, y, z;
};

Vec3 to_unit(const GeoPoint& p) {
  const double lat = p.lat_deg * kDeg;
  const double lon = p.lon_deg * kDeg;
  return {std::cos(lat) * std::cos(lon), std::cos(lat) * std::sin(lon), std::sin(lat)};
}

}  // namespace

bool is_valid(const GeoPoint& p) noexcept {
  return std::isfinite(p.lat_deg) && std::isfinite(p.lon_deg) && p.lat_deg >= -90.0 && p.lat_deg <= 90.0 &&
         p.lon_deg >= -180.0 && p.lon_deg < 180.0;
}

GeoPoint make_point(double lat_deg, double lon_deg) {
  if (lon_deg == 180.0) lon_deg = -180.0;
  GeoPoint p{lat_deg, lon_deg};
  if (!is_valid(p)) {
    throw ValidationError("coordinates out of range: latitude must be in [-90, 90], longitude in [-180, 180)");
  }
  return p;
}

double distance_km(const GeoPoint& a, const GeoPoint& b) {
  // Canonical argument order makes the result bit-for-bit symmetric.
  const bool swap = std::pair(a.lat_deg, a.lon_deg) > std::pair(b.lat_deg, b.lon_deg);
  const GeoPoint& p = swap ? b : a;
  const GeoPoint& q = swap ? a : b;
  const double lat1 = p.lat_deg * kDeg;
  const double lat2 = q.lat_deg * kDeg;
  const double s_lat = std::sin((lat2 - lat1) / 2.0);
  const double s_lon = std::sin((q.lon_deg - p.lon_deg) * kDeg / 2.0);
  const double h = s_lat * s_lat + std::cos(lat1) * std::cos(lat2) * s_lon * s_lon;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(h)));
}

double initial_azimuth_deg(const GeoPoint& a, const GeoPoint& b) {
  if (a == b) throw UndefinedAzimuthError();
  const double lat1 = a.lat_deg * kDeg;
  const double lat2 = b.lat_deg * kDeg;
  const double dlon = (b.lon_deg - a.lon_deg) * kDeg;
  const double y = std::sin(dlon) * std::cos(lat2);
  const double x = std::cos(lat1) * std::sin(lat2) - std::sin(lat1) * std::cos(lat2) * std::cos(dlon);
  double az = std::atan2(y, x) / kDeg;
  if (az < 0.0) az += 360.0;
  if (az >= 360.0) az -= 360.0;
  return az;
}

GeoPoint point_at_fraction(const GeoPoint& a, const GeoPoint& b, double t) {
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("fraction must lie in [0, 1]");
  if (t == 0.0) return a;
  if (t == 1.0) return b;

  const Vec3 u = to_unit(a);
  const Vec3 v = to_unit(b);
  const double cos_angle = std::clamp(u.x * v.x + u.y * v.y + u.z * v.z, -1.0, 1.0);
  const double angle = std::acos(cos_angle);
  if (angle == 0.0) return a;
  const double s = std::sin(angle);
  if (s < 1e-12) throw DomainError("the great circle through antipodal points is undefined");
  const double wa = std::sin((1.0 - t) * angle) / s;
  const double wb = std::sin(t * angle) / s;
  const Vec3 w{wa * u.x + wb * v.x, wa * u.y + wb * v.y, wa * u.z + wb * v.z};

  GeoPoint p{std::atan2(w.z, std::hypot(w.x, w.y)) / kDeg, std::atan2(w.y, w.x) / kDeg};
  if (p.lon_deg >= 180.0) p.lon_deg -= 360.0;
  return p;
}

}  // namespace botrf::geodesy
