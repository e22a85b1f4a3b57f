#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace botrf::units {

// Speed of light in m/us, so that wavelength_m = kSpeedOfLight / f_MHz.
inline constexpr double kSpeedOfLight = 299.792458;

// Offset between field strength (dBuV/m) and the power (dBm) a lossless
// isotropic antenna captures, P = E^2 * lambda^2 / (480 pi^2), at f = 1 MHz.
// The aperture formula gives 77.219 with the exact c; the conventional
// 77.216 is kept as the published constant (0.003 dB apart).
inline constexpr double kFieldToPowerOffsetDb = 77.216;

enum class Unit { mW, dBm, dBuV_per_m, MHz, meter };

struct Quantity {
  double value = 0.0;
  Unit unit = Unit::dBm;
};

double mw_to_dbm(double milliwatts);
double dbm_to_mw(double dbm);
double freq_to_wavelength(double mhz);
double wavelength_to_freq(double meters);
double dbuv_per_m_to_dbm(double dbuv_per_m, double mhz);
double dbm_to_dbuv_per_m(double dbm, double mhz);

// Accepts the spellings users type: "mw", "dBm", "dBuV/m", "dbuvm", "MHz", "m".
std::optional<Unit> parse_unit(std::string_view text);
std::string_view unit_name(Unit unit);

// Unit a value converts to when the caller names no target.
Unit default_target(Unit from);

// Throws DomainError on invalid input or an unsupported pair, and
// ValidationError when a field-strength conversion lacks a frequency.
Quantity convert(Quantity q, Unit to, std::optional<double> freq_mhz = std::nullopt);

}  // namespace botrf::units
