#include <doctest.h>

#include <cmath>
#include <cstring>
#include <map>
#include <string>

#include "botrf/itm.hpp"
#include "itm.h"
#include "oracle_cases.hpp"

using namespace botrf;

TEST_SUITE("itm_oracle") {
  TEST_CASE("port agrees with the reference implementation") {
    const auto cases = oracle::make_cases(60, 7);
    std::map<std::string, int> modes;
    for (const auto& c : cases) {
      const auto ref = oracle::run_reference(c);
      const auto got = itm::point_to_point(c.terrain, c.spacing_m, c.tx_h, c.rx_h, c.f_mhz, c.params);
      CAPTURE(c.label);
      CAPTURE(ref.mode);
      CHECK(std::fabs(got.loss_db - ref.loss_db) < 0.1);
      CHECK(got.mode_text == ref.mode);
      CHECK(got.error_code == ref.error_code);
      ++modes[oracle::horizon_of(ref.mode)];
    }
    for (const char* m : {"los", "single", "double"}) {
      CAPTURE(m);
      CHECK(modes[m] >= 5);
    }
  }

  TEST_CASE("inverse normal tail matches the reference at the median") {
    CHECK(itm::inverse_normal_tail(0.5) == doctest::Approx(0.0).epsilon(1e-3));
    CHECK(itm::inverse_normal_tail(0.1) == doctest::Approx(1.2816).epsilon(1e-3));
  }

  TEST_CASE("parameter validation") {
    itm::Params p;
    p.reliability = 1.0;
    CHECK_THROWS(p.validate());
    p = {};
    p.climate = 9;
    CHECK_THROWS(p.validate());
  }
}
