#include "botrf/dem.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <fstream>
#include <iterator>

#include <fmt/format.h>

#include "botrf/errors.hpp"
#include "botrf/kernels.hpp"

namespace botrf::dem {

std::string tile_name_for(const GeoPoint& p) {
  const int lat = static_cast<int>(std::floor(p.lat_deg));
  const int lon = static_cast<int>(std::floor(p.lon_deg));
  return fmt::format("{}{:02d}{}{:03d}", lat < 0 ? 'S' : 'N', std::abs(lat), lon < 0 ? 'W' : 'E', std::abs(lon));
}

std::optional<std::pair<int, int>> parse_tile_name(std::string_view name) {
  if (name.size() >= 4 && (name.ends_with(".hgt") || name.ends_with(".HGT"))) name.remove_suffix(4);
  if (name.size() != 7) return std::nullopt;
  const char ns = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
  const char ew = static_cast<char>(std::toupper(static_cast<unsigned char>(name[3])));
  if ((ns != 'N' && ns != 'S') || (ew != 'E' && ew != 'W')) return std::nullopt;
  auto digits = [](std::string_view s) {
    int v = 0;
    for (char c : s) {
      if (c < '0' || c > '9') return -1;
      v = v * 10 + (c - '0');
    }
    return v;
  };
  const int lat = digits(name.substr(1, 2));
  const int lon = digits(name.substr(4, 3));
  if (lat < 0 || lon < 0 || lat > 90 || lon > 180) return std::nullopt;
  return std::pair{ns == 'S' ? -lat : lat, ew == 'W' ? -lon : lon};
}

HgtTile::HgtTile(int sw_lat, int sw_lon, int side, std::vector<std::int16_t> samples)
    : sw_lat_(sw_lat), sw_lon_(sw_lon), side_(side), samples_(std::move(samples)) {
  if ((side != kSrtm1Side && side != kSrtm3Side) ||
      samples_.size() != static_cast<std::size_t>(side) * static_cast<std::size_t>(side)) {
    throw MalformedTileError(fmt::format("tile must be {0}x{0} or {1}x{1} samples", kSrtm1Side, kSrtm3Side));
  }
}

double HgtTile::elevation_at(const GeoPoint& p) const {
  const double cells = side_ - 1;
  double row = (sw_lat_ + 1.0 - p.lat_deg) * cells;
  double col = (p.lon_deg - sw_lon_) * cells;
  if (row < -1e-9 || row > cells + 1e-9 || col < -1e-9 || col > cells + 1e-9) {
    throw DomainError(fmt::format("point ({}, {}) lies outside tile {}", p.lat_deg, p.lon_deg,
                                  tile_name_for({sw_lat_ + 0.5, sw_lon_ + 0.5})));
  }
  // Snap coordinates that are a rounding error away from a grid line.
  if (std::abs(row - std::round(row)) < 1e-9) row = std::round(row);
  if (std::abs(col - std::round(col)) < 1e-9) col = std::round(col);
  row = std::clamp(row, 0.0, cells);
  col = std::clamp(col, 0.0, cells);

  const int r0 = std::min(static_cast<int>(row), side_ - 2);
  const int c0 = std::min(static_cast<int>(col), side_ - 2);
  const double fr = row - r0;
  const double fc = col - c0;

  std::int16_t raw[4] = {at(r0, c0), at(r0, c0 + 1), at(r0 + 1, c0), at(r0 + 1, c0 + 1)};
  double z[4];
  double sum = 0.0;
  int valid = 0;
  for (int i = 0; i < 4; ++i) {
    if (raw[i] != kVoid) {
      sum += raw[i];
      ++valid;
    }
  }
  if (valid == 0) {
    throw VoidDataError(fmt::format("no elevation data near ({:.4f}, {:.4f}): all surrounding DEM samples are void",
                                    p.lat_deg, p.lon_deg));
  }
  const double fill = sum / valid;
  for (int i = 0; i < 4; ++i) z[i] = raw[i] == kVoid ? fill : raw[i];

  const double north = z[0] * (1.0 - fc) + z[1] * fc;
  const double south = z[2] * (1.0 - fc) + z[3] * fc;
  return north * (1.0 - fr) + south * fr;
}

std::optional<int> side_for_byte_count(std::uintmax_t bytes) {
  constexpr auto bytes_for = [](std::uintmax_t side) { return side * side * 2; };
  if (bytes == bytes_for(kSrtm1Side)) return kSrtm1Side;
  if (bytes == bytes_for(kSrtm3Side)) return kSrtm3Side;
  return std::nullopt;
}

HgtTile decode_tile(std::span<const std::uint8_t> bytes, int sw_lat, int sw_lon) {
  const auto side = side_for_byte_count(bytes.size());
  if (!side) {
    throw MalformedTileError(fmt::format("malformed tile: {} bytes is neither an SRTM1 ({}) nor an SRTM3 ({}) tile",
                                         bytes.size(), 2ull * kSrtm1Side * kSrtm1Side,
                                         2ull * kSrtm3Side * kSrtm3Side));
  }
  std::vector<std::int16_t> samples(static_cast<std::size_t>(*side) * *side);
  kernels::decode_be16(bytes, samples);
  return HgtTile(sw_lat, sw_lon, *side, std::move(samples));
}

HgtTile load_tile(const std::filesystem::path& path) {
  const auto corner = parse_tile_name(path.filename().string());
  if (!corner) throw MalformedTileError("not an SRTM tile file name: " + path.filename().string());

  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read tile file " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error("cannot read tile file " + path.string());
  return decode_tile(bytes, corner->first, corner->second);
}

void write_tile(const std::filesystem::path& path, int side, std::span<const std::int16_t> samples) {
  if (samples.size() != static_cast<std::size_t>(side) * side) throw DomainError("sample count does not match side");
  std::vector<char> bytes(samples.size() * 2);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto u = static_cast<std::uint16_t>(samples[i]);
    bytes[2 * i] = static_cast<char>(u >> 8);
    bytes[2 * i + 1] = static_cast<char>(u & 0xff);
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("cannot write tile file " + path.string());
}

struct TileCache::Slot {
  std::mutex mutex;
  std::condition_variable ready;
  bool loading = true;
  std::shared_ptr<const HgtTile> tile;
  std::exception_ptr error;
};

TileCache::TileCache(std::filesystem::path root_dir, std::size_t capacity)
    : root_dir_(std::move(root_dir)), capacity_(std::max<std::size_t>(capacity, 1)) {}

std::shared_ptr<const HgtTile> TileCache::tile(const std::string& name) const {
  std::shared_ptr<Slot> slot;
  bool owner = false;
  {
    std::lock_guard lock(mutex_);
    if (auto it = slots_.find(name); it != slots_.end()) {
      slot = it->second;
      lru_.remove(name);
      lru_.push_front(name);
    } else {
      slot = std::make_shared<Slot>();
      slots_.emplace(name, slot);
      lru_.push_front(name);
      owner = true;
      ++loads_;
      while (slots_.size() > capacity_) {
        const std::string victim = lru_.back();
        lru_.pop_back();
        slots_.erase(victim);
      }
    }
  }

  if (owner) {
    std::shared_ptr<const HgtTile> loaded;
    std::exception_ptr error;
    try {
      const auto path = root_dir_ / (name + ".hgt");
      if (!std::filesystem::exists(path)) throw MissingDataError(name);
      loaded = std::make_shared<const HgtTile>(load_tile(path));
    } catch (...) {
      error = std::current_exception();
    }
    {
      std::lock_guard lock(slot->mutex);
      slot->loading = false;
      slot->tile = loaded;
      slot->error = error;
    }
    slot->ready.notify_all();
    if (error) {
      // Failed loads are not cached, so a tile dropped in later is picked up.
      std::lock_guard lock(mutex_);
      if (auto it = slots_.find(name); it != slots_.end() && it->second == slot) {
        slots_.erase(it);
        lru_.remove(name);
      }
      std::rethrow_exception(error);
    }
    return loaded;
  }

  std::unique_lock lock(slot->mutex);
  slot->ready.wait(lock, [&] { return !slot->loading; });
  if (slot->error) std::rethrow_exception(slot->error);
  return slot->tile;
}

double TileCache::elevation_at(const GeoPoint& p) const { return tile(tile_name_for(p))->elevation_at(p); }

std::size_t TileCache::resident() const {
  std::lock_guard lock(mutex_);
  return slots_.size();
}

std::size_t TileCache::load_count() const {
  std::lock_guard lock(mutex_);
  return loads_;
}

}  // namespace botrf::dem
