#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "botrf/itm.hpp"
#include "botrf/profile.hpp"

namespace botrf {

enum class PropagationMode { LineOfSight, SingleHorizon, DoubleHorizon, Diffraction, Troposcatter };
enum class LossModel { Fspl, KnifeEdge, Itm };

std::string_view mode_name(PropagationMode mode) noexcept;   // "Line-Of-Sight", ...
std::string_view model_name(LossModel model) noexcept;       // "fspl", "ke", "itm"
std::string_view model_label(LossModel model) noexcept;      // "Longley-Rice", ...
std::optional<LossModel> parse_model(std::string_view text) noexcept;

using ItmParams = itm::Params;

struct KnifeEdge {
  std::size_t index;
  double distance_km;
  double nu;
  double loss_db;
};

struct PathLossResult {
  double fspl_db = 0.0;
  double model_loss_db = 0.0;
  double shielding_db = 0.0;  // model_loss_db - fspl_db
  PropagationMode mode = PropagationMode::LineOfSight;
  LossModel model = LossModel::Fspl;
  double worst_clearance = 0.0;
  std::string mode_detail;
  std::vector<KnifeEdge> edges;        // knife-edge model only
  std::vector<std::string> warnings;   // model range warnings
};

namespace propagation {

// 32.45 + 20 log10(d_km) + 20 log10(f_MHz). Throws DomainError.
double fspl_db(double distance_km, double frequency_mhz);

// Single knife-edge parameter for an obstacle h meters above the ray.
double knife_edge_v(double h_m, double d1_km, double d2_km, double frequency_mhz);

// 6.9 + 20 log10(sqrt((v - 0.1)^2 + 1) + v - 0.1) for v > -0.78, else 0.
double knife_edge_loss_db(double v);

// Free-space loss plus up to three knife edges picked Epstein-Peterson style:
// the dominant edge of the whole path, then the dominant edge on each side.
PathLossResult baseline_loss(const TerrainProfile& p);

// Longley-Rice point-to-point. Throws UnsupportedFrequencyError outside
// 20-20000 MHz and DomainError for a degenerate profile.
PathLossResult itm_loss(const TerrainProfile& p, const ItmParams& params = {});

PathLossResult fspl_only(const TerrainProfile& p);

PathLossResult compute_loss(const TerrainProfile& p, LossModel model, const ItmParams& params = {});

}  // namespace propagation
}  // namespace botrf
