#include "botrf/report.hpp"

#include <cmath>

#include <fmt/format.h>

namespace botrf {
namespace {

std::string fixed(double value, int digits) { return fmt::format("{:.{}f}", round_to(value, digits), digits); }

std::string signed_angle(double deg) {
  const double r = round_to(deg, 1);
  return fmt::format("{}{:.1f}", r < 0 ? "" : "+", r);
}

std::string angle_label(double deg) { return round_to(deg, 1) < 0 ? "Depression angle" : "Elevation angle"; }

// Antenna heights print like the inputs: "50", "6.5".
std::string height(double m) { return fmt::format("{}", round_to(m, 2)); }

double azimuth_display(double deg) {
  const double r = round_to(deg, 1);
  return r >= 360.0 ? 0.0 : r;
}

}  // namespace

double round_to(double value, int digits) {
  const double scale = std::pow(10.0, digits);
  const double r = std::round(value * scale) / scale;
  return r == 0.0 ? 0.0 : r;
}

std::string format_location(const GeoPoint& p) {
  return fmt::format("{:.4f} {} / {:.4f} {}", std::abs(round_to(p.lat_deg, 4)), p.lat_deg < 0 ? "South" : "North",
                     std::abs(round_to(p.lon_deg, 4)), p.lon_deg < 0 ? "West" : "East");
}

LinkReport generate_report(const LinkGeometry& geom, const TerrainProfile& profile, const PathLossResult& loss,
                           const profile::ClearanceVerdict& verdict) {
  LinkReport r;
  r.tx_name = geom.tx.name;
  r.rx_name = geom.rx.name;
  r.tx_location = format_location(geom.tx.point);
  r.rx_location = format_location(geom.rx.point);
  r.tx_elevation_m = profile.terrain_m.front();
  r.rx_elevation_m = profile.terrain_m.back();
  r.tx_antenna_m = geom.tx_antenna_agl_m;
  r.rx_antenna_m = geom.rx_antenna_agl_m;
  r.frequency_mhz = geom.frequency_mhz;
  r.k_factor = geom.k_factor;
  r.distance_km = geodesy::distance_km(geom.tx.point, geom.rx.point);
  r.azimuth_to_rx_deg = geodesy::initial_azimuth_deg(geom.tx.point, geom.rx.point);
  r.azimuth_to_tx_deg = geodesy::initial_azimuth_deg(geom.rx.point, geom.tx.point);

  LinkGeometry grounded = geom;
  grounded.tx.ground_elevation_m = r.tx_elevation_m;
  grounded.rx.ground_elevation_m = r.rx_elevation_m;
  const auto angles = profile::pointing_angles_deg(grounded);
  r.tx_angle_deg = angles.tx_elevation_deg;
  r.rx_angle_deg = angles.rx_elevation_deg;

  r.fspl_db = loss.fspl_db;
  r.model_loss_db = loss.model_loss_db;
  r.shielding_db = loss.model_loss_db - loss.fspl_db;
  r.model = loss.model;
  r.mode = loss.mode;
  r.verdict = verdict;

  std::string clearance;
  if (verdict.cls == profile::ClearanceClass::Clear) {
    clearance = "No obstructions to LOS due to terrain were detected.\nThe first Fresnel zone is clear.";
  } else {
    clearance = fmt::format("{}\nObstruction at {} km: {:.0f}% of first Fresnel zone blocked (clearance {} F1)",
                            verdict.worst_fraction < 0 ? "Terrain obstructs the line of sight."
                                                       : "The line of sight clears the terrain.",
                            fixed(verdict.worst_distance_km, 2), round_to((1.0 - verdict.worst_fraction) * 100.0, 0),
                            fixed(verdict.worst_fraction, 2));
  }
  r.clearance_statement = clearance;

  const std::string loss_label =
      loss.model == LossModel::Fspl ? "Model path loss" : fmt::format("{} path loss", model_label(loss.model));

  std::string t;
  t += fmt::format("Transmitter site: {}\n", r.tx_name);
  t += fmt::format("Site location: {}\n", r.tx_location);
  t += fmt::format("Elevation: {} m above sea level\n", fixed(r.tx_elevation_m, 0));
  t += fmt::format("Antenna height: {} m above ground\n", height(r.tx_antenna_m));
  t += fmt::format("Distance to {}: {} km\n", r.rx_name, fixed(r.distance_km, 2));
  t += fmt::format("Azimuth to {}: {:.1f} degrees\n", r.rx_name, azimuth_display(r.azimuth_to_rx_deg));
  t += fmt::format("{}: {} degrees\n", angle_label(r.tx_angle_deg), signed_angle(r.tx_angle_deg));
  t += "\n";
  t += fmt::format("Receiver site: {}\n", r.rx_name);
  t += fmt::format("Site location: {}\n", r.rx_location);
  t += fmt::format("Elevation: {} m above sea level\n", fixed(r.rx_elevation_m, 0));
  t += fmt::format("Antenna height: {} m above ground\n", height(r.rx_antenna_m));
  t += fmt::format("Distance to {}: {} km\n", r.tx_name, fixed(r.distance_km, 2));
  t += fmt::format("Azimuth to {}: {:.1f} degrees\n", r.tx_name, azimuth_display(r.azimuth_to_tx_deg));
  t += fmt::format("{}: {} degrees\n", angle_label(r.rx_angle_deg), signed_angle(r.rx_angle_deg));
  t += "\n";
  t += fmt::format("Free space path loss: {} dB\n", fixed(r.fspl_db, 2));
  t += fmt::format("{}: {} dB\n", loss_label, fixed(r.model_loss_db, 2));
  t += fmt::format("Attenuation due to terrain shielding: {} dB\n", fixed(r.shielding_db, 2));
  t += fmt::format("Mode of propagation: {}\n", mode_name(r.mode));
  t += "\n";
  t += clearance;
  t += "\n\n";
  t += fmt::format("Frequency: {} MHz, K factor: {}\n", round_to(r.frequency_mhz, 3), fixed(r.k_factor, 3));
  for (const auto& w : loss.warnings) t += fmt::format("Warning: {}\n", w);
  r.text = std::move(t);
  return r;
}

}  // namespace botrf
