#include "botrf/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <string>

#include "botrf/errors.hpp"

namespace botrf::units {
namespace {

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw DomainError(std::string(what) + " must be a positive number");
  }
}

std::string lowered(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

double mw_to_dbm(double milliwatts) {
  require_positive(milliwatts, "power in mW");
  return 10.0 * std::log10(milliwatts);
}

double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }

double freq_to_wavelength(double mhz) {
  require_positive(mhz, "frequency");
  return kSpeedOfLight / mhz;
}

double wavelength_to_freq(double meters) {
  require_positive(meters, "wavelength");
  return kSpeedOfLight / meters;
}

double dbuv_per_m_to_dbm(double dbuv_per_m, double mhz) {
  require_positive(mhz, "frequency");
  return dbuv_per_m - 20.0 * std::log10(mhz) - kFieldToPowerOffsetDb;
}

double dbm_to_dbuv_per_m(double dbm, double mhz) {
  require_positive(mhz, "frequency");
  return dbm + 20.0 * std::log10(mhz) + kFieldToPowerOffsetDb;
}

std::optional<Unit> parse_unit(std::string_view text) {
  const std::string u = lowered(text);
  if (u == "mw") return Unit::mW;
  if (u == "dbm") return Unit::dBm;
  if (u == "dbuv/m" || u == "dbuvm" || u == "dbµv/m" || u == "dbu") return Unit::dBuV_per_m;
  if (u == "mhz") return Unit::MHz;
  if (u == "m" || u == "meter" || u == "meters") return Unit::meter;
  return std::nullopt;
}

std::string_view unit_name(Unit unit) {
  switch (unit) {
    case Unit::mW: return "mW";
    case Unit::dBm: return "dBm";
    case Unit::dBuV_per_m: return "dBuV/m";
    case Unit::MHz: return "MHz";
    case Unit::meter: return "m";
  }
  return "?";
}

Unit default_target(Unit from) {
  switch (from) {
    case Unit::mW: return Unit::dBm;
    case Unit::dBm: return Unit::mW;
    case Unit::dBuV_per_m: return Unit::dBm;
    case Unit::MHz: return Unit::meter;
    case Unit::meter: return Unit::MHz;
  }
  return Unit::dBm;
}

Quantity convert(Quantity q, Unit to, std::optional<double> freq_mhz) {
  if (!std::isfinite(q.value)) throw DomainError("value must be a finite number");
  if (q.unit == to) {
    if (to == Unit::mW || to == Unit::MHz || to == Unit::meter) require_positive(q.value, "value");
    return q;
  }

  auto need_freq = [&]() {
    if (!freq_mhz) throw ValidationError("field-strength conversion needs a frequency: add f=<MHz>");
    return *freq_mhz;
  };

  // Route everything through dBm for the power family.
  const auto is_power = [](Unit u) { return u == Unit::mW || u == Unit::dBm || u == Unit::dBuV_per_m; };
  if (is_power(q.unit) && is_power(to)) {
    double dbm = 0.0;
    switch (q.unit) {
      case Unit::mW: dbm = mw_to_dbm(q.value); break;
      case Unit::dBuV_per_m: dbm = dbuv_per_m_to_dbm(q.value, need_freq()); break;
      default: dbm = q.value; break;
    }
    switch (to) {
      case Unit::mW: return {dbm_to_mw(dbm), to};
      case Unit::dBuV_per_m: return {dbm_to_dbuv_per_m(dbm, need_freq()), to};
      default: return {dbm, to};
    }
  }
  if (q.unit == Unit::MHz && to == Unit::meter) return {freq_to_wavelength(q.value), to};
  if (q.unit == Unit::meter && to == Unit::MHz) return {wavelength_to_freq(q.value), to};

  throw DomainError("cannot convert " + std::string(unit_name(q.unit)) + " to " + std::string(unit_name(to)));
}

}  // namespace botrf::units
