#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "botrf/dem.hpp"
#include "botrf/geodesy.hpp"
#include "botrf/profile.hpp"
#include "botrf/site.hpp"

namespace testing {

// Sites and elevations of the worked example.
inline const botrf::GeoPoint kEdifAdm{8.5931, -71.1469};
inline const botrf::GeoPoint kPlanMorro{8.5086, -71.2221};
inline const botrf::GeoPoint kPrintShop{8.5617, -71.1920};
inline constexpr double kEdifAdmElev = 1582, kPlanMorroElev = 2311, kPrintShopElev = 1315;
inline constexpr double kExampleFreqMhz = 5815;

inline botrf::Site site(std::string name, botrf::GeoPoint p, std::optional<double> elev = std::nullopt) {
  botrf::Site s;
  s.owner = "test";
  s.name = std::move(name);
  s.point = p;
  s.ground_elevation_m = elev;
  return s;
}

class FunctionDem final : public botrf::ElevationModel {
 public:
  explicit FunctionDem(std::function<double(const botrf::GeoPoint&)> f) : f_(std::move(f)) {}
  double elevation_at(const botrf::GeoPoint& p) const override { return f_(p); }

 private:
  std::function<double(const botrf::GeoPoint&)> f_;
};

// Ground that varies linearly with distance from `a` towards `b`, reproducing
// the two end elevations exactly.
inline FunctionDem ramp_dem(botrf::GeoPoint a, double elev_a, botrf::GeoPoint b, double elev_b) {
  return FunctionDem([=](const botrf::GeoPoint& p) {
    const double total = botrf::geodesy::distance_km(a, b);
    const double t = total > 0 ? botrf::geodesy::distance_km(a, p) / total : 0.0;
    return elev_a + (elev_b - elev_a) * t;
  });
}

class TempDir {
 public:
  TempDir() {
    std::string tmpl = (std::filesystem::temp_directory_path() / "botrf-test-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw std::runtime_error("mkdtemp failed");
    path_ = tmpl;
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

// A link along the equator, `km` long, with explicit ground samples.
inline botrf::LinkGeometry equator_link(double km, double tx_h, double rx_h, double f_mhz = kExampleFreqMhz,
                                        double k = botrf::kDefaultKFactor) {
  botrf::LinkGeometry g;
  g.tx = site("a", {0.0, 0.0});
  g.rx = site("b", {0.0, km / (botrf::geodesy::kEarthRadiusKm * 3.14159265358979323846 / 180.0)});
  g.tx_antenna_agl_m = tx_h;
  g.rx_antenna_agl_m = rx_h;
  g.frequency_mhz = f_mhz;
  g.k_factor = k;
  return g;
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240501);
  return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

}  // namespace testing
