#include <cmath>
#include <limits>

#include "botrf/geodesy.hpp"
#include "botrf/kernels.hpp"

namespace botrf::kernels {
namespace {

void profile_geometry_scalar(const ProfileGeometryInput& in, const ProfileGeometryOutput& out) {
  const std::size_t n = in.distance_km.size();
  const double bulge_scale = 1000.0 / (2.0 * in.k_factor * geodesy::kEarthRadiusKm);
  const double inv_total = 1.0 / in.total_km;
  const double los_rise = in.los_end_m - in.los_start_m;
  const double total_m = in.total_km * 1000.0;
  const double lambda_over_total = in.wavelength_m / total_m;

  for (std::size_t i = 0; i < n; ++i) {
    const double d = in.distance_km[i];
    const double rest = in.total_km - d;
    const double bulge = (d * rest) * bulge_scale;
    const double los = in.los_start_m + los_rise * (d * inv_total);
    const double d1 = d * 1000.0;
    const double d2 = rest * 1000.0;
    const double fresnel = std::sqrt((d1 * d2) * lambda_over_total);
    out.bulge_m[i] = bulge;
    out.los_m[i] = los;
    out.fresnel1_m[i] = fresnel;
    out.clearance_fraction[i] = ((los - in.terrain_m[i]) - bulge) / fresnel;
  }
}

void knife_edge_scan_scalar(const EdgeScanInput& in, std::span<double> nu_out) {
  const std::size_t n = in.distance_km.size();
  const double x0 = in.distance_km.front();
  const double span_km = in.distance_km.back() - x0;
  const double rise = in.end_height_m - in.start_height_m;
  const double two_over_lambda = 2.0 / in.wavelength_m;
  const double span_m = span_km * 1000.0;

  for (std::size_t i = 0; i < n; ++i) {
    const double along = in.distance_km[i] - x0;
    const double ray = in.start_height_m + rise * (along / span_km);
    const double h = in.height_m[i] - ray;
    const double d1 = along * 1000.0;
    const double d2 = span_m - d1;
    nu_out[i] = h * std::sqrt(two_over_lambda * (span_m / (d1 * d2)));
  }
  nu_out[0] = -std::numeric_limits<double>::infinity();
  nu_out[n - 1] = -std::numeric_limits<double>::infinity();
}

ArgExtreme arg_min_scalar(std::span<const double> v, std::size_t first, std::size_t last) {
  ArgExtreme best{v[first], first};
  for (std::size_t i = first + 1; i < last; ++i) {
    if (v[i] < best.value) best = {v[i], i};
  }
  return best;
}

ArgExtreme arg_max_scalar(std::span<const double> v, std::size_t first, std::size_t last) {
  ArgExtreme best{v[first], first};
  for (std::size_t i = first + 1; i < last; ++i) {
    if (v[i] > best.value) best = {v[i], i};
  }
  return best;
}

void decode_be16_scalar(std::span<const std::uint8_t> bytes, std::span<std::int16_t> out) {
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto hi = static_cast<std::uint16_t>(bytes[2 * i]);
    const auto lo = static_cast<std::uint16_t>(bytes[2 * i + 1]);
    out[i] = static_cast<std::int16_t>(static_cast<std::uint16_t>((hi << 8) | lo));
  }
}

}  // namespace

namespace detail {
const KernelTable kScalarTable{
    profile_geometry_scalar, knife_edge_scan_scalar, arg_min_scalar, arg_max_scalar, decode_be16_scalar,
};
}  // namespace detail

}  // namespace botrf::kernels
