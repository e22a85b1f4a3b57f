#pragma once

#include <vector>

#include "botrf/profile.hpp"
#include "botrf/propagation.hpp"

namespace botrf {

// Cable losses are entered as positive dB and subtracted.
struct RadioParams {
  double tx_power_dbm = 0.0;
  double tx_cable_loss_db = 0.0;
  double tx_antenna_gain_dbi = 0.0;
  double rx_antenna_gain_dbi = 0.0;
  double rx_cable_loss_db = 0.0;
  double rx_sensitivity_dbm = 0.0;

  void validate() const;
};

struct LinkBudget {
  double eirp_dbm = 0.0;
  double path_loss_db = 0.0;
  double rx_power_dbm = 0.0;
  double margin_db = 0.0;
};

struct PowerSample {
  double distance_km;
  double level_dbm;
};

namespace linkbudget {

double eirp_dbm(const RadioParams& r);

// Throws DomainError for a non-positive path loss.
LinkBudget budget(const RadioParams& r, double path_loss_db);

// Received level along the path if the receiver sat at distance d:
// EIRP - FSPL(d) + rx gain - rx cable. Sample 0 carries the EIRP; the last
// sample uses `path_loss_db`, so it equals budget(r, path_loss_db).rx_power_dbm.
std::vector<PowerSample> power_along_path(const RadioParams& r, double total_km, double frequency_mhz,
                                          double path_loss_db, std::size_t samples = 200);

// Same series sampled at the profile distances, ending at loss.fspl_db.
std::vector<PowerSample> power_along_path(const RadioParams& r, const TerrainProfile& p, const PathLossResult& loss);

}  // namespace linkbudget
}  // namespace botrf
