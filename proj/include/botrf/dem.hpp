#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <list>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "botrf/geodesy.hpp"

namespace botrf {

// Anything that answers ground-elevation queries. The tile cache is the
// production implementation; tests plug in analytic terrain.
class ElevationModel {
 public:
  virtual ~ElevationModel() = default;
  // Meters above sea level. Throws MissingDataError / VoidDataError.
  virtual double elevation_at(const GeoPoint& p) const = 0;
};

namespace dem {

inline constexpr std::int16_t kVoid = -32768;
inline constexpr int kSrtm1Side = 3601;
inline constexpr int kSrtm3Side = 1201;

// "N08W072" for the tile whose south-west corner is floor(lat), floor(lon).
std::string tile_name_for(const GeoPoint& p);

// Inverse of tile_name_for on the corner; accepts an optional ".hgt" suffix.
std::optional<std::pair<int, int>> parse_tile_name(std::string_view name);

// One SRTM tile. Row 0 is the northern edge, column 0 the western edge.
class HgtTile {
 public:
  HgtTile(int sw_lat, int sw_lon, int side, std::vector<std::int16_t> samples);

  int sw_lat() const noexcept { return sw_lat_; }
  int sw_lon() const noexcept { return sw_lon_; }
  int side() const noexcept { return side_; }
  std::span<const std::int16_t> samples() const noexcept { return samples_; }
  std::int16_t at(int row, int col) const { return samples_[static_cast<std::size_t>(row) * side_ + col]; }

  // Bilinear interpolation; void corners are replaced by the mean of the
  // non-void corners of the same cell. Throws VoidDataError if all are void.
  double elevation_at(const GeoPoint& p) const;

 private:
  int sw_lat_;
  int sw_lon_;
  int side_;
  std::vector<std::int16_t> samples_;
};

// Grid side implied by a file size, or nullopt for neither SRTM1 nor SRTM3.
std::optional<int> side_for_byte_count(std::uintmax_t bytes);

// Decodes raw big-endian bytes. Throws MalformedTileError on a bad size.
HgtTile decode_tile(std::span<const std::uint8_t> bytes, int sw_lat, int sw_lon);

// The file name must be a tile name ("N08W072.hgt"); the corner comes from it.
HgtTile load_tile(const std::filesystem::path& path);

// Writes a tile in .hgt format (big-endian). Used by tools and tests.
void write_tile(const std::filesystem::path& path, int side, std::span<const std::int16_t> samples);

// LRU cache over a flat directory of <NAME>.hgt files. Safe for concurrent
// readers; a given tile is read from disk at most once at a time, and
// evicted tiles stay alive for readers that still hold them.
class TileCache final : public ElevationModel {
 public:
  explicit TileCache(std::filesystem::path root_dir, std::size_t capacity = 16);

  double elevation_at(const GeoPoint& p) const override;

  // Throws MissingDataError when <name>.hgt is absent.
  std::shared_ptr<const HgtTile> tile(const std::string& name) const;

  const std::filesystem::path& root_dir() const noexcept { return root_dir_; }
  std::size_t capacity() const noexcept { return capacity_; }
  std::size_t resident() const;
  std::size_t load_count() const;

 private:
  struct Slot;

  std::filesystem::path root_dir_;
  std::size_t capacity_;
  mutable std::mutex mutex_;
  mutable std::map<std::string, std::shared_ptr<Slot>> slots_;
  mutable std::list<std::string> lru_;  // front = most recent
  mutable std::size_t loads_ = 0;
};

}  // namespace dem
}  // namespace botrf
