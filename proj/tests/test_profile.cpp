#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "botrf/errors.hpp"
#include "botrf/profile.hpp"
#include "support.hpp"

using namespace botrf;
using namespace botrf::profile;

namespace {

TerrainProfile flat_profile(const LinkGeometry& g, double km, std::size_t n, double ground = 0.0) {
  return evaluate_profile(g, km, std::vector<double>(n, ground));
}

// Puts a one-sample hill at `index` whose top sits `above_los` meters above the LOS.
TerrainProfile with_hill(const LinkGeometry& g, double km, std::size_t n, std::size_t index, double above_los) {
  const auto flat = flat_profile(g, km, n);
  std::vector<double> terrain(n, 0.0);
  terrain[index] = flat.los_m[index] - flat.bulge_m[index] + above_los;
  return evaluate_profile(g, km, terrain);
}

}  // namespace

TEST_SUITE("profile") {
  TEST_CASE("earth bulge") {
    CHECK(earth_bulge_m(0, 5, 4.0 / 3.0) == 0.0);
    CHECK(earth_bulge_m(6.26, 6.26, 4.0 / 3.0) == doctest::Approx(2.31).epsilon(0.002));
    CHECK(earth_bulge_m(6.26, 6.26, 1.0) == doctest::Approx(3.08).epsilon(0.002));
    CHECK(earth_bulge_m(6.26, 6.26, 1.0) > earth_bulge_m(6.26, 6.26, 4.0 / 3.0));
    CHECK(earth_bulge_m(3, 4, 1.2) == doctest::Approx(3 * 4 / (12.7420176 * 1.2)).epsilon(1e-9));
    CHECK_THROWS_AS(earth_bulge_m(1, 1, 0), DomainError);
  }

  TEST_CASE("first Fresnel radius") {
    CHECK(fresnel_radius_m(0, 10, 5815) == 0.0);
    CHECK(fresnel_radius_m(6.26, 6.26, 5815) == doctest::Approx(12.70).epsilon(0.01 / 12.70));
    CHECK(fresnel_radius_m(6.26, 6.26, 5815) ==
          doctest::Approx(std::sqrt(0.0515545 * 6260.0 * 6260.0 / 12520.0)).epsilon(1e-5));
    for (int i = 0; i < 100; ++i) {
      const double a = testing::uniform(0, 50), b = testing::uniform(0, 50), f = testing::uniform(20, 20000);
      CHECK(fresnel_radius_m(a, b, f) == doctest::Approx(fresnel_radius_m(b, a, f)));
      const double total = a + b;
      CHECK(fresnel_radius_m(a, b, f) <= fresnel_radius_m(total / 2, total / 2, f) + 1e-12);
    }
  }

  TEST_CASE("flat terrain: constant LOS, tightest clearance at mid-path") {
    const auto g = testing::equator_link(10, 20, 20);
    const auto p = flat_profile(g, 10, 101);
    for (double los : p.los_m) CHECK(los == doctest::Approx(20.0));
    CHECK(p.clearance_fraction.front() == kEndpointClearance);
    CHECK(p.clearance_fraction.back() == kEndpointClearance);
    const auto v = analyze_clearance(p);
    CHECK(v.worst_index == 50);
    CHECK(v.worst_distance_km == doctest::Approx(5.0));
    CHECK(v.cls == ClearanceClass::Clear);
  }

  TEST_CASE("build_profile sampling and endpoints") {
    auto g = testing::equator_link(10, 30, 10);
    const auto dem = testing::FunctionDem([](const GeoPoint& p) { return 100.0 + 2000.0 * p.lon_deg; });
    const auto p = build_profile(g, dem, 30.0);
    const double total = geodesy::distance_km(g.tx.point, g.rx.point);
    CHECK(p.size() == static_cast<std::size_t>(std::ceil(total * 1000 / 30.0)) + 1);
    CHECK(p.sample_spacing_m <= 30.0);
    CHECK(p.terrain_m.front() == dem.elevation_at(g.tx.point));
    CHECK(p.terrain_m.back() == dem.elevation_at(g.rx.point));
    CHECK(p.los_m.front() == doctest::Approx(p.terrain_m.front() + 30));
    CHECK(p.los_m.back() == doctest::Approx(p.terrain_m.back() + 10));
    CHECK_THROWS_AS(build_profile(g, dem, 5.0), DomainError);
    CHECK_THROWS_AS(build_profile(g, dem, 2000.0), DomainError);

    auto same = g;
    same.rx = same.tx;
    same.rx.name = "b";
    CHECK_THROWS_AS(build_profile(same, dem), PathTooShortError);

    auto bad = g;
    bad.frequency_mhz = 30000;
    CHECK_THROWS_AS(build_profile(bad, dem), UnsupportedFrequencyError);
  }

  TEST_CASE("missing tiles surface from build_profile") {
    testing::TempDir dir;
    dem::TileCache cache(dir.path());
    LinkGeometry g;
    g.tx = testing::site("edif_adm", testing::kEdifAdm);
    g.rx = testing::site("plan_morro", testing::kPlanMorro);
    CHECK_THROWS_AS(build_profile(g, cache), MissingDataError);
  }

  TEST_CASE("clearance classes") {
    CHECK(classify(0.6) == ClearanceClass::Clear);
    CHECK(classify(0.59) == ClearanceClass::Partial);
    CHECK(classify(0.1) == ClearanceClass::Partial);
    CHECK(classify(0.0) == ClearanceClass::Grazing);
    CHECK(classify(-0.1) == ClearanceClass::Obstructed);

    const auto g = testing::equator_link(10, 20, 20);
    const auto graze = analyze_clearance(with_hill(g, 10, 101, 50, 0.0));
    CHECK(graze.cls == ClearanceClass::Grazing);
    CHECK(graze.worst_fraction == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(graze.worst_index == 50);

    const auto blocked = analyze_clearance(with_hill(g, 10, 101, 30, 10.0));
    CHECK(blocked.cls == ClearanceClass::Obstructed);
    CHECK(blocked.worst_fraction < 0);
    CHECK(blocked.worst_distance_km == doctest::Approx(3.0));

    TerrainProfile tiny;
    tiny.distance_km = {0, 1};
    CHECK_THROWS_AS(analyze_clearance(tiny), DomainError);
  }

  TEST_CASE("pointing angles of the worked example") {
    LinkGeometry g;
    g.tx = testing::site("edif_adm", testing::kEdifAdm, testing::kEdifAdmElev);
    g.rx = testing::site("plan_morro", testing::kPlanMorro, testing::kPlanMorroElev);
    g.tx_antenna_agl_m = 50;
    g.rx_antenna_agl_m = 6;
    auto a = pointing_angles_deg(g);
    CHECK(a.tx_elevation_deg == doctest::Approx(3.09).epsilon(0.05 / 3.09));
    CHECK(a.rx_elevation_deg == doctest::Approx(-3.18).epsilon(0.05 / 3.18));

    LinkGeometry g2;
    g2.tx = testing::site("plan_morro", testing::kPlanMorro, testing::kPlanMorroElev);
    g2.rx = testing::site("print_shop", testing::kPrintShop, testing::kPrintShopElev);
    g2.tx_antenna_agl_m = 6;
    g2.rx_antenna_agl_m = 5;
    a = pointing_angles_deg(g2);
    CHECK(a.tx_elevation_deg == doctest::Approx(-8.40).epsilon(0.02 / 8.4));
    CHECK(std::fabs(a.tx_elevation_deg - -8.5) <= 0.2);

    auto level = testing::equator_link(2, 10, 10);
    level.tx.ground_elevation_m = 100;
    level.rx.ground_elevation_m = 100;
    a = pointing_angles_deg(level);
    CHECK(a.tx_elevation_deg < 0);
    CHECK(a.rx_elevation_deg < 0);
    CHECK(a.tx_elevation_deg > -0.01);

    g.tx.ground_elevation_m.reset();
    CHECK_THROWS_AS(pointing_angles_deg(g), ValidationError);
  }

  TEST_CASE("lower K and lower antennas reduce clearance") {
    std::vector<double> terrain(201);
    for (std::size_t i = 0; i < terrain.size(); ++i) terrain[i] = 40.0 * std::sin(static_cast<double>(i) / 15.0);
    const auto base = evaluate_profile(testing::equator_link(20, 60, 60, 5815, 4.0 / 3.0), 20, terrain);
    const auto k1 = evaluate_profile(testing::equator_link(20, 60, 60, 5815, 1.0), 20, terrain);
    const auto low = evaluate_profile(testing::equator_link(20, 50, 60, 5815, 4.0 / 3.0), 20, terrain);
    for (std::size_t i = 1; i + 1 < terrain.size(); ++i) {
      CHECK(k1.clearance_fraction[i] < base.clearance_fraction[i]);
      CHECK(low.clearance_fraction[i] <= base.clearance_fraction[i]);
    }
  }
}
