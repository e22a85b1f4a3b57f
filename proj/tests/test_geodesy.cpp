#include <doctest.h>

#include <cmath>

#include "botrf/errors.hpp"
#include "botrf/geodesy.hpp"
#include "support.hpp"

using namespace botrf;
using namespace botrf::geodesy;
using testing::kEdifAdm;
using testing::kPlanMorro;
using testing::kPrintShop;

TEST_SUITE("geodesy") {
  TEST_CASE("worked example distances") {
    CHECK(distance_km(kEdifAdm, kPlanMorro) == doctest::Approx(12.52).epsilon(0.005));
    CHECK(distance_km(kPlanMorro, kPrintShop) == doctest::Approx(6.77).epsilon(0.005));
    CHECK(distance_km(kEdifAdm, kEdifAdm) == 0.0);
  }

  TEST_CASE("worked example azimuths") {
    CHECK(initial_azimuth_deg(kEdifAdm, kPlanMorro) == doctest::Approx(221.3).epsilon(0.3 / 221.3));
    CHECK(initial_azimuth_deg(kPlanMorro, kEdifAdm) == doctest::Approx(41.3).epsilon(0.3 / 41.3));
    CHECK(initial_azimuth_deg(kPlanMorro, kPrintShop) == doctest::Approx(29.2).epsilon(0.3 / 29.2));
    CHECK(initial_azimuth_deg(kPrintShop, kPlanMorro) == doctest::Approx(209.3).epsilon(0.3 / 209.3));
    CHECK(initial_azimuth_deg({0, 0}, {1, 0}) == doctest::Approx(0.0));
    CHECK(initial_azimuth_deg({0, 0}, {0, 1}) == doctest::Approx(90.0));
    CHECK_THROWS_AS(initial_azimuth_deg(kEdifAdm, kEdifAdm), UndefinedAzimuthError);
  }

  TEST_CASE("point validation") {
    CHECK(is_valid({8.5, -71.1}));
    CHECK_FALSE(is_valid({95, 0}));
    CHECK_FALSE(is_valid({0, 181}));
    CHECK(make_point(0, 180).lon_deg == -180.0);
    CHECK_THROWS_AS(make_point(-91, 0), ValidationError);
    CHECK_THROWS_AS(make_point(std::nan(""), 0), ValidationError);
  }

  TEST_CASE("intermediate points") {
    CHECK(point_at_fraction(kEdifAdm, kPlanMorro, 0.0) == kEdifAdm);
    const auto end = point_at_fraction(kEdifAdm, kPlanMorro, 1.0);
    CHECK(end.lat_deg == doctest::Approx(kPlanMorro.lat_deg));
    CHECK(end.lon_deg == doctest::Approx(kPlanMorro.lon_deg));
    const auto mid = point_at_fraction(kEdifAdm, kPlanMorro, 0.5);
    CHECK(std::fabs(distance_km(kEdifAdm, mid) - distance_km(mid, kPlanMorro)) < 0.001);
    CHECK_THROWS_AS(point_at_fraction(kEdifAdm, kPlanMorro, 1.5), DomainError);
  }

  TEST_CASE("properties over random sub-100 km pairs") {
    for (int i = 0; i < 1000; ++i) {
      const GeoPoint a{testing::uniform(-80, 80), testing::uniform(-179, 179)};
      const GeoPoint b{a.lat_deg + testing::uniform(-0.6, 0.6), a.lon_deg + testing::uniform(-0.6, 0.6)};
      CHECK(distance_km(a, b) == distance_km(b, a));
      if (distance_km(a, b) < 0.01) continue;
      const double t1 = testing::uniform(0, 0.99);
      const double t2 = t1 + testing::uniform(0.005, 1 - t1);
      CHECK(distance_km(a, point_at_fraction(a, b, t1)) < distance_km(a, point_at_fraction(a, b, t2)));
    }
  }

  TEST_CASE("azimuth reciprocity on short paths") {
    for (int i = 0; i < 1000; ++i) {
      const GeoPoint a{testing::uniform(-30, 30), testing::uniform(-179, 179)};
      const GeoPoint b{a.lat_deg + testing::uniform(-0.4, 0.4), a.lon_deg + testing::uniform(-0.4, 0.4)};
      if (distance_km(a, b) < 0.01) continue;
      const double diff = std::fabs(initial_azimuth_deg(a, b) - initial_azimuth_deg(b, a));
      CHECK(std::fabs(diff - 180.0) <= 0.5);
    }
  }
}
