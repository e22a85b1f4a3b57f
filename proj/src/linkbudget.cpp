#include "botrf/linkbudget.hpp"

#include <algorithm>
#include <cmath>

#include "botrf/errors.hpp"

namespace botrf {

void RadioParams::validate() const {
  for (double v : {tx_power_dbm, tx_cable_loss_db, tx_antenna_gain_dbi, rx_antenna_gain_dbi, rx_cable_loss_db,
                   rx_sensitivity_dbm}) {
    if (!std::isfinite(v)) throw ValidationError("radio parameters must be finite numbers");
  }
  if (tx_cable_loss_db < 0.0 || rx_cable_loss_db < 0.0) {
    throw ValidationError("cable losses are entered as positive dB values");
  }
}

namespace linkbudget {
namespace {

std::vector<PowerSample> taper(const RadioParams& r, std::span<const double> distances, double frequency_mhz,
                               double end_loss_db) {
  const double eirp = eirp_dbm(r);
  const double rx_side = r.rx_antenna_gain_dbi - r.rx_cable_loss_db;
  std::vector<PowerSample> out;
  out.reserve(distances.size());
  out.push_back({0.0, eirp});
  for (std::size_t i = 1; i + 1 < distances.size(); ++i) {
    out.push_back({distances[i], eirp - propagation::fspl_db(distances[i], frequency_mhz) + rx_side});
  }
  out.push_back({distances.back(), eirp - end_loss_db + rx_side});
  return out;
}

}  // namespace

double eirp_dbm(const RadioParams& r) { return r.tx_power_dbm - r.tx_cable_loss_db + r.tx_antenna_gain_dbi; }

LinkBudget budget(const RadioParams& r, double path_loss_db) {
  r.validate();
  if (!(path_loss_db > 0.0)) throw DomainError("path loss must be positive");
  LinkBudget b;
  b.eirp_dbm = eirp_dbm(r);
  b.path_loss_db = path_loss_db;
  b.rx_power_dbm = b.eirp_dbm - path_loss_db + r.rx_antenna_gain_dbi - r.rx_cable_loss_db;
  b.margin_db = b.rx_power_dbm - r.rx_sensitivity_dbm;
  return b;
}

std::vector<PowerSample> power_along_path(const RadioParams& r, double total_km, double frequency_mhz,
                                          double path_loss_db, std::size_t samples) {
  r.validate();
  if (!(total_km > 0.0)) throw DomainError("path length must be positive");
  samples = std::max<std::size_t>(samples, 2);
  std::vector<double> d(samples);
  for (std::size_t i = 0; i < samples; ++i) d[i] = total_km * static_cast<double>(i) / static_cast<double>(samples - 1);
  d.back() = total_km;
  return taper(r, d, frequency_mhz, path_loss_db);
}

std::vector<PowerSample> power_along_path(const RadioParams& r, const TerrainProfile& p, const PathLossResult& loss) {
  r.validate();
  if (p.size() < 2) throw DomainError("profile is empty");
  return taper(r, p.distance_km, p.geometry.frequency_mhz, loss.fspl_db);
}

}  // namespace linkbudget
}  // namespace botrf
