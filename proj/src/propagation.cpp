#include "botrf/propagation.hpp"

#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "botrf/errors.hpp"
#include "botrf/kernels.hpp"
#include "botrf/units.hpp"

namespace botrf {

std::string_view mode_name(PropagationMode mode) noexcept {
  switch (mode) {
    case PropagationMode::LineOfSight: return "Line-Of-Sight";
    case PropagationMode::SingleHorizon: return "Single Horizon";
    case PropagationMode::DoubleHorizon: return "Double Horizon";
    case PropagationMode::Diffraction: return "Diffraction";
    case PropagationMode::Troposcatter: return "Troposcatter";
  }
  return "?";
}

std::string_view model_name(LossModel model) noexcept {
  switch (model) {
    case LossModel::Fspl: return "fspl";
    case LossModel::KnifeEdge: return "ke";
    case LossModel::Itm: return "itm";
  }
  return "?";
}

std::string_view model_label(LossModel model) noexcept {
  switch (model) {
    case LossModel::Fspl: return "Free space";
    case LossModel::KnifeEdge: return "Knife-edge";
    case LossModel::Itm: return "Longley-Rice";
  }
  return "?";
}

std::optional<LossModel> parse_model(std::string_view text) noexcept {
  if (text == "itm") return LossModel::Itm;
  if (text == "ke") return LossModel::KnifeEdge;
  if (text == "fspl") return LossModel::Fspl;
  return std::nullopt;
}

namespace propagation {
namespace {

constexpr double kNuThreshold = -0.78;

struct EdgeSearch {
  const TerrainProfile& p;
  std::vector<double> heights;  // terrain + bulge: the obstacle seen against a straight ray
  double wavelength_m;

  // Dominant edge strictly inside (first, last), or nullopt when the ray
  // between the effective heights at the ends clears everything.
  std::optional<KnifeEdge> dominant(std::size_t first, std::size_t last, double start_h, double end_h) const {
    if (last - first < 2) return std::nullopt;
    const std::size_t n = last - first + 1;
    std::vector<double> nu(n);
    kernels::knife_edge_scan(
        {
            .distance_km = std::span(p.distance_km).subspan(first, n),
            .height_m = std::span(heights).subspan(first, n),
            .start_height_m = start_h,
            .end_height_m = end_h,
            .wavelength_m = wavelength_m,
        },
        nu);
    const auto best = kernels::arg_max(nu, 1, n - 1);
    if (!(best.value > kNuThreshold)) return std::nullopt;
    const std::size_t idx = first + best.index;
    return KnifeEdge{idx, p.distance_km[idx], best.value, knife_edge_loss_db(best.value)};
  }
};

}  // namespace

double fspl_db(double distance_km, double frequency_mhz) {
  if (!(distance_km > 0.0) || !(frequency_mhz > 0.0)) {
    throw DomainError("free-space loss needs a positive distance and frequency");
  }
  return 32.45 + 20.0 * std::log10(distance_km) + 20.0 * std::log10(frequency_mhz);
}

double knife_edge_v(double h_m, double d1_km, double d2_km, double frequency_mhz) {
  if (!(d1_km > 0.0) || !(d2_km > 0.0)) throw DomainError("knife-edge distances must be positive");
  const double lambda = units::freq_to_wavelength(frequency_mhz);
  const double d1 = d1_km * 1000.0;
  const double d2 = d2_km * 1000.0;
  return h_m * std::sqrt(2.0 * (d1 + d2) / (lambda * d1 * d2));
}

double knife_edge_loss_db(double v) {
  if (!(v > kNuThreshold)) return 0.0;
  const double a = v - 0.1;
  return 6.9 + 20.0 * std::log10(std::sqrt(a * a + 1.0) + a);
}

PathLossResult fspl_only(const TerrainProfile& p) {
  PathLossResult r;
  r.model = LossModel::Fspl;
  r.fspl_db = fspl_db(p.total_km, p.geometry.frequency_mhz);
  r.model_loss_db = r.fspl_db;
  r.shielding_db = 0.0;
  r.worst_clearance = profile::analyze_clearance(p).worst_fraction;
  r.mode = r.worst_clearance >= 0.6 ? PropagationMode::LineOfSight : PropagationMode::Diffraction;
  r.mode_detail = std::string(mode_name(r.mode));
  return r;
}

PathLossResult baseline_loss(const TerrainProfile& p) {
  PathLossResult r = fspl_only(p);
  r.model = LossModel::KnifeEdge;

  EdgeSearch search{p, std::vector<double>(p.size()), units::freq_to_wavelength(p.geometry.frequency_mhz)};
  for (std::size_t i = 0; i < p.size(); ++i) search.heights[i] = p.terrain_m[i] + p.bulge_m[i];

  const std::size_t last = p.size() - 1;
  const double tx_h = p.los_m.front();
  const double rx_h = p.los_m.back();
  if (auto main = search.dominant(0, last, tx_h, rx_h)) {
    r.edges.push_back(*main);
    const double top = search.heights[main->index];
    if (auto left = search.dominant(0, main->index, tx_h, top)) r.edges.push_back(*left);
    if (auto right = search.dominant(main->index, last, top, rx_h)) r.edges.push_back(*right);
  }

  double diffraction = 0.0;
  for (const auto& e : r.edges) diffraction += e.loss_db;
  r.model_loss_db = r.fspl_db + diffraction;
  r.shielding_db = r.model_loss_db - r.fspl_db;
  return r;
}

PathLossResult itm_loss(const TerrainProfile& p, const ItmParams& params) {
  const double f = p.geometry.frequency_mhz;
  if (!(f >= kMinFrequencyMhz && f <= kMaxFrequencyMhz)) {
    throw UnsupportedFrequencyError(fmt::format("frequency {} MHz is outside the Longley-Rice range {}-{} MHz", f,
                                                kMinFrequencyMhz, kMaxFrequencyMhz));
  }
  if (p.size() < 4) throw DomainError("the Longley-Rice model needs at least two interior profile samples");

  const auto itm = itm::point_to_point(p.terrain_m, p.sample_spacing_m, p.geometry.tx_antenna_agl_m,
                                       p.geometry.rx_antenna_agl_m, f, params);
  PathLossResult r;
  r.model = LossModel::Itm;
  r.fspl_db = fspl_db(p.total_km, f);
  r.model_loss_db = itm.loss_db;
  r.shielding_db = r.model_loss_db - r.fspl_db;
  r.worst_clearance = profile::analyze_clearance(p).worst_fraction;
  r.mode_detail = itm.mode_text;
  if (itm.troposcatter_dominant) {
    r.mode = PropagationMode::Troposcatter;
  } else {
    switch (itm.horizon) {
      case itm::HorizonCase::LineOfSight: r.mode = PropagationMode::LineOfSight; break;
      case itm::HorizonCase::SingleHorizon: r.mode = PropagationMode::SingleHorizon; break;
      case itm::HorizonCase::DoubleHorizon: r.mode = PropagationMode::DoubleHorizon; break;
    }
  }
  if (itm.error_code == 1) {
    r.warnings.emplace_back("some Longley-Rice parameters are near their limits; use the result with caution");
  } else if (itm.error_code == 2) {
    r.warnings.emplace_back("Longley-Rice substituted default parameters for impossible ones");
  } else if (itm.error_code >= 3) {
    r.warnings.emplace_back("Longley-Rice parameters are out of range; the result is probably invalid");
  }
  return r;
}

PathLossResult compute_loss(const TerrainProfile& p, LossModel model, const ItmParams& params) {
  switch (model) {
    case LossModel::Fspl: return fspl_only(p);
    case LossModel::KnifeEdge: return baseline_loss(p);
    case LossModel::Itm: return itm_loss(p, params);
  }
  throw DomainError("unknown loss model");
}

}  // namespace propagation
}  // namespace botrf
