#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

#include "botrf/geodesy.hpp"

namespace botrf {

using Timestamp = std::chrono::sys_seconds;

// A named, user-owned location. Ground elevation is resolved from the DEM
// when the site is stored and is empty while the covering tile is missing.
struct Site {
  std::string owner;
  std::string name;
  GeoPoint point;
  std::optional<double> ground_elevation_m;
  Timestamp created_at{};

  friend bool operator==(const Site&, const Site&) = default;
};

// [A-Za-z0-9_]{1,32}
bool is_valid_site_name(std::string_view name) noexcept;

}  // namespace botrf
