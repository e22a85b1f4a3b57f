#include <doctest.h>

#include <cmath>

#include "botrf/errors.hpp"
#include "botrf/propagation.hpp"
#include "support.hpp"

using namespace botrf;
using namespace botrf::propagation;

namespace {

// Flat ground with hills whose tops sit exactly on the LOS (grazing).
TerrainProfile grazing_hills(const std::vector<std::size_t>& at, double km = 10, std::size_t n = 301) {
  const auto g = testing::equator_link(km, 25, 25);
  const auto flat = profile::evaluate_profile(g, km, std::vector<double>(n, 0.0));
  std::vector<double> terrain(n, 0.0);
  for (auto i : at) terrain[i] = flat.los_m[i] - flat.bulge_m[i];
  return profile::evaluate_profile(g, km, terrain);
}

}  // namespace

TEST_SUITE("propagation") {
  TEST_CASE("free-space loss") {
    CHECK(fspl_db(12.52, 5815) == doctest::Approx(129.69).epsilon(0.01 / 129.69));
    CHECK(fspl_db(6.77, 5815) == doctest::Approx(124.35).epsilon(0.01 / 124.35));
    CHECK(fspl_db(1, 1) == doctest::Approx(32.45));
    CHECK(fspl_db(20, 900) - fspl_db(10, 900) == doctest::Approx(6.0206).epsilon(1e-4));
    CHECK(fspl_db(10, 1800) - fspl_db(10, 900) == doctest::Approx(6.0206).epsilon(1e-4));
    CHECK_THROWS_AS(fspl_db(0, 900), DomainError);
  }

  TEST_CASE("knife-edge parameter") {
    CHECK(knife_edge_v(0, 3, 4, 5815) == 0.0);
    const double f1 = profile::fresnel_radius_m(3, 4, 5815);
    CHECK(knife_edge_v(f1, 3, 4, 5815) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
    CHECK(knife_edge_v(-f1, 3, 4, 5815) == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-9));
  }

  TEST_CASE("knife-edge loss") {
    CHECK(knife_edge_loss_db(0) == doctest::Approx(6.03).epsilon(0.05 / 6.03));
    CHECK(knife_edge_loss_db(-1) == 0.0);
    CHECK(knife_edge_loss_db(2.4) == doctest::Approx(20.5).epsilon(0.1 / 20.5));
    double prev = 0;
    for (double v = -0.78; v < 10; v += 0.01) {
      const double l = knife_edge_loss_db(v);
      CHECK(l >= prev - 1e-12);
      prev = l;
    }
  }

  TEST_CASE("baseline model") {
    const auto g = testing::equator_link(10, 80, 80);
    const auto flat = profile::evaluate_profile(g, 10, std::vector<double>(301, 0.0));
    auto r = baseline_loss(flat);
    CHECK(r.model_loss_db == r.fspl_db);
    CHECK(r.shielding_db == 0.0);
    CHECK(r.mode == PropagationMode::LineOfSight);
    CHECK(r.model == LossModel::KnifeEdge);

    r = baseline_loss(grazing_hills({150}));
    CHECK(r.shielding_db == doctest::Approx(6.03).epsilon(0.1 / 6.03));
    CHECK(r.mode == PropagationMode::Diffraction);
    REQUIRE_FALSE(r.edges.empty());
    CHECK(r.edges.front().index == 150);

    r = baseline_loss(grazing_hills({75, 225}));
    CHECK(r.shielding_db == doctest::Approx(12.06).epsilon(0.2 / 12.06));
    CHECK(r.edges.size() == 2);
  }

  TEST_CASE("Longley-Rice through the engine") {
    // short, clear path: the model stays within 2 dB of free space
    const auto g = testing::equator_link(5, 30, 30, 2400);
    const auto p = profile::evaluate_profile(g, 5, std::vector<double>(167, 100.0));
    const auto r = itm_loss(p);
    CHECK(std::fabs(r.model_loss_db - r.fspl_db) <= 2.0);
    CHECK(r.mode == PropagationMode::LineOfSight);
    CHECK(r.shielding_db == doctest::Approx(r.model_loss_db - r.fspl_db).epsilon(1e-12));
    CHECK(r.mode_detail == "Line-Of-Sight Mode");

    auto low = testing::equator_link(5, 30, 30, 10);
    CHECK_THROWS_AS(low.validate(), UnsupportedFrequencyError);
    auto q = p;
    q.geometry.frequency_mhz = 25000;
    CHECK_THROWS_AS(itm_loss(q), UnsupportedFrequencyError);
    q = profile::evaluate_profile(g, 5, std::vector<double>(3, 100.0));
    CHECK_THROWS_AS(itm_loss(q), DomainError);
  }

  TEST_CASE("model selection") {
    CHECK(parse_model("itm") == LossModel::Itm);
    CHECK(parse_model("ke") == LossModel::KnifeEdge);
    CHECK(parse_model("fspl") == LossModel::Fspl);
    CHECK_FALSE(parse_model("hata").has_value());
    CHECK(model_label(LossModel::Itm) == "Longley-Rice");
    CHECK(mode_name(PropagationMode::LineOfSight) == "Line-Of-Sight");
    const auto p = grazing_hills({150});
    for (auto m : {LossModel::Fspl, LossModel::KnifeEdge, LossModel::Itm}) {
      const auto r = compute_loss(p, m);
      CHECK(r.model == m);
      CHECK(r.shielding_db == doctest::Approx(r.model_loss_db - r.fspl_db).epsilon(1e-12));
    }
  }
}
