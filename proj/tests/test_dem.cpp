#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <thread>

#include "botrf/dem.hpp"
#include "botrf/errors.hpp"
#include "support.hpp"

using namespace botrf;
using namespace botrf::dem;

namespace {

GeoPoint node(int sw_lat, int sw_lon, int side, double row, double col) {
  return {sw_lat + 1.0 - row / (side - 1), sw_lon + col / (side - 1)};
}

std::vector<std::int16_t> filled(int side, std::int16_t v) {
  return std::vector<std::int16_t>(static_cast<std::size_t>(side) * side, v);
}

}  // namespace

TEST_SUITE("dem") {
  TEST_CASE("tile names") {
    CHECK(tile_name_for({8.5931, -71.1469}) == "N08W072");
    CHECK(tile_name_for({0.0, 0.0}) == "N00E000");
    CHECK(tile_name_for({-0.5, -0.5}) == "S01W001");
    CHECK(tile_name_for({45.2, 179.9}) == "N45E179");
    CHECK(parse_tile_name("N08W072.hgt") == std::pair{8, -72});
    CHECK(parse_tile_name("S01W001") == std::pair{-1, -1});
    CHECK_FALSE(parse_tile_name("X08W072").has_value());
    CHECK(side_for_byte_count(3601ull * 3601 * 2) == kSrtm1Side);
    CHECK(side_for_byte_count(1201ull * 1201 * 2) == kSrtm3Side);
    CHECK_FALSE(side_for_byte_count(10).has_value());
  }

  TEST_CASE("constant SRTM1 tile") {
    testing::TempDir dir;
    const auto path = dir.path() / "N08W072.hgt";
    write_tile(path, kSrtm1Side, filled(kSrtm1Side, 100));
    CHECK(std::filesystem::file_size(path) == 3601ull * 3601 * 2);
    const auto tile = load_tile(path);
    CHECK(tile.side() == kSrtm1Side);
    CHECK(tile.sw_lat() == 8);
    CHECK(tile.sw_lon() == -72);
    CHECK(std::all_of(tile.samples().begin(), tile.samples().end(), [](std::int16_t v) { return v == 100; }));
    for (int i = 0; i < 100; ++i) {
      const GeoPoint p{testing::uniform(8.0, 9.0), testing::uniform(-72.0, -71.0)};
      CHECK(tile.elevation_at(p) == 100.0);
    }
  }

  TEST_CASE("malformed size") {
    testing::TempDir dir;
    const auto path = dir.path() / "N00E000.hgt";
    std::ofstream(path, std::ios::binary) << "0123456789";
    CHECK_THROWS_AS(load_tile(path), MalformedTileError);
    const std::vector<std::uint8_t> bytes(10, 0);
    CHECK_THROWS_AS(decode_tile(bytes, 0, 0), MalformedTileError);
  }

  TEST_CASE("orientation: row 0 is north, column 0 is west") {
    testing::TempDir dir;
    auto samples = filled(kSrtm3Side, 0);
    samples[0] = 2311;                                                     // NW
    samples[static_cast<std::size_t>(kSrtm3Side) * kSrtm3Side - 1] = 1582;  // SE
    samples[kSrtm3Side - 1] = 77;                                          // NE
    write_tile(dir.path() / "N08W072.hgt", kSrtm3Side, samples);
    const auto tile = load_tile(dir.path() / "N08W072.hgt");
    CHECK(tile.at(0, 0) == 2311);
    CHECK(tile.elevation_at({9.0, -72.0}) == 2311.0);
    CHECK(tile.elevation_at({8.0, -71.0 - 1e-12}) == doctest::Approx(1582.0));
    CHECK(tile.elevation_at({9.0, -71.0 - 1e-12}) == doctest::Approx(77.0));
    CHECK(tile.elevation_at({8.0, -72.0}) == 0.0);
  }

  TEST_CASE("bilinear plane and analytic oracle") {
    const int side = kSrtm3Side;
    std::vector<std::int16_t> s(static_cast<std::size_t>(side) * side);
    for (int r = 0; r < side; ++r)
      for (int c = 0; c < side; ++c) s[static_cast<std::size_t>(r) * side + c] = static_cast<std::int16_t>(3 * r + 2 * c + 5);
    const HgtTile tile(8, -72, side, s);
    for (int i = 0; i < 500; ++i) {
      const double r = testing::uniform(0, side - 1), c = testing::uniform(0, side - 1);
      const auto p = node(8, -72, side, r, c);
      CHECK(tile.elevation_at(p) == doctest::Approx(3 * r + 2 * c + 5).epsilon(1e-9));
    }
    // mid-cell query against the four-corner formula
    const double r = 100.5, c = 200.5;
    const double expected = (tile.at(100, 200) + tile.at(100, 201) + tile.at(101, 200) + tile.at(101, 201)) / 4.0;
    CHECK(std::fabs(tile.elevation_at(node(8, -72, side, r, c)) - expected) < 1e-6);
  }

  TEST_CASE("grid nodes are exact and interpolation stays within neighbours") {
    const int side = kSrtm3Side;
    std::vector<std::int16_t> s(static_cast<std::size_t>(side) * side);
    std::uniform_int_distribution<int> dist(-400, 4000);
    for (auto& v : s) v = static_cast<std::int16_t>(dist(testing::rng()));
    const HgtTile tile(-1, 10, side, s);
    for (int i = 0; i < 500; ++i) {
      const int r = std::uniform_int_distribution<int>(0, side - 1)(testing::rng());
      const int c = std::uniform_int_distribution<int>(0, side - 1)(testing::rng());
      CHECK(tile.elevation_at(node(-1, 10, side, r, c)) == tile.at(r, c));
      const double fr = testing::uniform(0, side - 1), fc = testing::uniform(0, side - 1);
      const int r0 = std::min(static_cast<int>(fr), side - 2), c0 = std::min(static_cast<int>(fc), side - 2);
      const std::int16_t corners[] = {tile.at(r0, c0), tile.at(r0, c0 + 1), tile.at(r0 + 1, c0), tile.at(r0 + 1, c0 + 1)};
      const double v = tile.elevation_at(node(-1, 10, side, fr, fc));
      CHECK(v >= *std::min_element(std::begin(corners), std::end(corners)) - 1e-9);
      CHECK(v <= *std::max_element(std::begin(corners), std::end(corners)) + 1e-9);
    }
  }

  TEST_CASE("void fill") {
    const int side = kSrtm3Side;
    auto s = filled(side, 100);
    // cell (10,10): NW 100, NE void, SW 200, SE 300
    s[10 * side + 11] = kVoid;
    s[11 * side + 10] = 200;
    s[11 * side + 11] = 300;
    // cell (20,20) entirely void
    for (int r : {20, 21})
      for (int c : {20, 21}) s[static_cast<std::size_t>(r) * side + c] = kVoid;
    const HgtTile tile(0, 0, side, s);
    // void corner becomes mean(100, 200, 300) = 200; centre = mean(100, 200, 200, 300)
    CHECK(tile.elevation_at(node(0, 0, side, 10.5, 10.5)) == doctest::Approx(200.0));
    // top edge of the cell: halfway between 100 and the filled 200
    CHECK(tile.elevation_at(node(0, 0, side, 10.0, 10.5)) == doctest::Approx(150.0));
    CHECK_THROWS_AS(tile.elevation_at(node(0, 0, side, 20.5, 20.5)), VoidDataError);
    CHECK_THROWS_AS(tile.elevation_at({2.0, 0.5}), DomainError);
  }

  TEST_CASE("tile cache") {
    testing::TempDir dir;
    for (const char* name : {"N00E000", "N00E001", "N01E000"})
      write_tile(dir.path() / (std::string(name) + ".hgt"), kSrtm3Side, filled(kSrtm3Side, 42));
    TileCache cache(dir.path(), 2);
    for (int i = 0; i < 50; ++i) CHECK(cache.elevation_at({0.5, 0.5}) == 42.0);
    CHECK(cache.load_count() == 1);
    cache.elevation_at({0.5, 1.5});
    cache.elevation_at({1.5, 0.5});
    CHECK(cache.resident() <= 2);
    CHECK(cache.load_count() == 3);

    try {
      cache.elevation_at({8.5931, -71.1469});
      FAIL("expected MissingDataError");
    } catch (const MissingDataError& e) {
      CHECK(e.tile() == "N08W072");
      CHECK(std::string(e.what()).find("N08W072.hgt") != std::string::npos);
    }
    CHECK(cache.resident() <= 2);
  }

  TEST_CASE("tile cache under concurrent readers loads once") {
    testing::TempDir dir;
    write_tile(dir.path() / "N00E000.hgt", kSrtm1Side, filled(kSrtm1Side, 7));
    TileCache cache(dir.path(), 4);
    std::vector<std::thread> threads;
    std::atomic<int> bad{0};
    for (int t = 0; t < 8; ++t)
      threads.emplace_back([&] {
        for (int i = 0; i < 100; ++i)
          if (cache.elevation_at({0.25, 0.75}) != 7.0) ++bad;
      });
    for (auto& t : threads) t.join();
    CHECK(bad == 0);
    CHECK(cache.load_count() == 1);
  }
}
