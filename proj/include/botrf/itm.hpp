#pragma once

#include <span>
#include <string>

// Longley-Rice Irregular Terrain Model, point-to-point mode. A C++ port of
// the public-domain NTIA/ITS reference algorithm (ITMDLL 1.2.2), with the
// reference's function-static state moved into a per-call object.
namespace botrf::itm {

enum class Polarization { Horizontal = 0, Vertical = 1 };

// Radio climate codes 1-7: equatorial, continental subtropical, maritime
// tropical, desert, continental temperate, maritime temperate over land,
// maritime temperate over sea.
struct Params {
  double surface_refractivity = 301.0;  // N-units
  double rel_permittivity = 15.0;
  double conductivity = 0.005;  // S/m
  int climate = 5;
  Polarization polarization = Polarization::Vertical;
  double reliability = 0.5;
  double confidence = 0.5;

  // Throws ValidationError.
  void validate() const;
};

enum class HorizonCase { LineOfSight, SingleHorizon, DoubleHorizon };

struct Result {
  double loss_db = 0.0;   // total basic transmission loss
  double fspl_db = 0.0;   // free-space part the model adds to
  HorizonCase horizon = HorizonCase::LineOfSight;
  bool troposcatter_dominant = false;
  std::string mode_text;  // e.g. "Double Horizon, Diffraction Dominant"
  int error_code = 0;     // 0 ok, 1 caution, 2 defaults substituted, 3-4 out of range
};

// terrain_m: uniformly spaced ground elevations from tx to rx (>= 4 samples).
// Heights are antenna heights above ground. Throws DomainError.
Result point_to_point(std::span<const double> terrain_m, double spacing_m, double tx_height_m, double rx_height_m,
                      double frequency_mhz, const Params& params);

// Inverse of the standard normal complementary distribution, as the model uses it.
double inverse_normal_tail(double q);

}  // namespace botrf::itm
