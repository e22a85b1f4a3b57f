#include <doctest.h>

#include <cmath>

#include "botrf/errors.hpp"
#include "botrf/linkbudget.hpp"
#include "botrf/report.hpp"
#include "support.hpp"

using namespace botrf;
using namespace botrf::linkbudget;

namespace {

RadioParams example_radio() { return RadioParams{20, 0, 24, 24, 0, -87}; }

}  // namespace

TEST_SUITE("linkbudget") {
  TEST_CASE("EIRP") {
    CHECK(eirp_dbm(example_radio()) == 44.0);
    CHECK(eirp_dbm(RadioParams{}) == 0.0);
    CHECK(eirp_dbm(RadioParams{30, 3, 6, 0, 0, 0}) == 33.0);
  }

  TEST_CASE("worked example budget") {
    const auto b = budget(example_radio(), 129.69);
    CHECK(b.eirp_dbm == 44.0);
    CHECK(round_to(b.rx_power_dbm, 2) == -61.69);
    CHECK(round_to(b.margin_db, 2) == 25.31);
    CHECK(round_to(b.margin_db, 0) == 25.0);
    CHECK(b.margin_db - b.rx_power_dbm + example_radio().rx_sensitivity_dbm == 0.0);
    CHECK(round_to(budget(example_radio(), 124.35).margin_db, 2) == 30.65);

    RadioParams r = example_radio();
    r.rx_sensitivity_dbm = b.rx_power_dbm;
    CHECK(budget(r, 129.69).margin_db == 0.0);
    CHECK_THROWS_AS(budget(example_radio(), 0), DomainError);
    r = example_radio();
    r.tx_cable_loss_db = -1;
    CHECK_THROWS_AS(budget(r, 100), ValidationError);
  }

  TEST_CASE("gain linearity") {
    for (int i = 0; i < 200; ++i) {
      RadioParams r{testing::uniform(-10, 40), testing::uniform(0, 5),   testing::uniform(0, 30),
                    testing::uniform(0, 30),   testing::uniform(0, 5),   testing::uniform(-100, -60)};
      const double loss = testing::uniform(60, 180), x = std::round(testing::uniform(-6, 6));
      auto up = r;
      up.tx_antenna_gain_dbi += x;
      const auto a = budget(r, loss), b = budget(up, loss);
      CHECK(b.eirp_dbm - a.eirp_dbm == doctest::Approx(x).epsilon(1e-12));
      CHECK(b.rx_power_dbm - a.rx_power_dbm == doctest::Approx(x).epsilon(1e-12));
      CHECK(b.margin_db - a.margin_db == doctest::Approx(x).epsilon(1e-12));
    }
  }

  TEST_CASE("power along the path") {
    const auto r = example_radio();
    const double fspl = propagation::fspl_db(12.52, 5815);
    const auto s = power_along_path(r, 12.52, 5815, fspl, 201);
    REQUIRE(s.size() == 201);
    CHECK(s.front().distance_km == 0.0);
    CHECK(s.front().level_dbm == 44.0);
    CHECK(s.back().distance_km == 12.52);
    CHECK(s.back().level_dbm == doctest::Approx(budget(r, fspl).rx_power_dbm).epsilon(1e-12));
    CHECK(round_to(power_along_path(r, 12.52, 5815, 129.69).back().level_dbm, 2) == -61.69);
    CHECK(s[100].level_dbm - s.back().level_dbm == doctest::Approx(6.0206).epsilon(1e-4));
    for (std::size_t i = 3; i < s.size(); ++i) CHECK(s[i].level_dbm < s[i - 1].level_dbm);
  }

  TEST_CASE("power along a profile") {
    const auto g = testing::equator_link(8, 20, 20);
    const auto p = profile::evaluate_profile(g, 8, std::vector<double>(100, 0.0));
    const auto loss = propagation::fspl_only(p);
    const auto s = power_along_path(example_radio(), p, loss);
    CHECK(s.size() == p.size());
    CHECK(s.back().level_dbm == doctest::Approx(budget(example_radio(), loss.fspl_db).rx_power_dbm).epsilon(1e-12));
  }
}
