#pragma once

#include <string>

#include "botrf/profile.hpp"
#include "botrf/propagation.hpp"

namespace botrf {

// Rounds half away from zero at `digits` decimals; negative zero becomes 0.
double round_to(double value, int digits);

// "8.5931 North / 71.1469 West"
std::string format_location(const GeoPoint& p);

struct LinkReport {
  std::string tx_name;
  std::string rx_name;
  std::string tx_location;
  std::string rx_location;
  double tx_elevation_m = 0;
  double rx_elevation_m = 0;
  double tx_antenna_m = 0;
  double rx_antenna_m = 0;
  double frequency_mhz = 0;
  double k_factor = 0;
  double distance_km = 0;
  double azimuth_to_rx_deg = 0;
  double azimuth_to_tx_deg = 0;
  double tx_angle_deg = 0;
  double rx_angle_deg = 0;
  double fspl_db = 0;
  double model_loss_db = 0;
  double shielding_db = 0;  // model_loss_db - fspl_db, unrounded
  LossModel model = LossModel::Itm;
  PropagationMode mode = PropagationMode::LineOfSight;
  profile::ClearanceVerdict verdict;
  std::string clearance_statement;
  std::string text;
};

LinkReport generate_report(const LinkGeometry& geom, const TerrainProfile& profile, const PathLossResult& loss,
                           const profile::ClearanceVerdict& verdict);

}  // namespace botrf
