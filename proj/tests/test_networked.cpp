#include <doctest.h>

#include <cstdlib>

#include "botrf/dem.hpp"
#include "botrf/gateway.hpp"
#include "support.hpp"

using namespace botrf;

// Needs real SRTM data: DEM_DIR pointing at a directory holding N08W072.hgt.
TEST_SUITE("networked") {
  TEST_CASE("worked example link over real terrain") {
    const char* dir = std::getenv("DEM_DIR");
    if (!dir || !std::filesystem::exists(std::filesystem::path(dir) / "N08W072.hgt")) {
      MESSAGE("skipped: DEM_DIR with N08W072.hgt not set");
      return;
    }
    dem::TileCache tiles(dir);
    CHECK(tiles.elevation_at(testing::kEdifAdm) == doctest::Approx(testing::kEdifAdmElev).epsilon(10.0 / 1582));
    SiteStore store(std::nullopt, &tiles);
    Gateway gw(store, &tiles);
    store.put_site("u", "edif_adm", testing::kEdifAdm);
    store.put_site("u", "plan_morro", testing::kPlanMorro);
    const auto lc = gw.compute_link("u", LinkRequest{std::string("edif_adm"), std::string("plan_morro"), 50, 6, 5815});
    CHECK(lc.verdict.cls == profile::ClearanceClass::Clear);
    CHECK(std::fabs(lc.loss.model_loss_db - 129.55) <= 0.5);
  }
}
