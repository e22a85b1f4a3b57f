#include <doctest.h>

#include "botrf/command.hpp"

using namespace botrf;

namespace {

CommandError::Kind error_kind(std::string_view line) {
  try {
    parse_command(line);
  } catch (const CommandError& e) {
    return e.kind();
  }
  FAIL("parse succeeded: " << line);
  return CommandError::Kind::Empty;
}

}  // namespace

TEST_SUITE("command") {
  TEST_CASE("verbatim pow line") {
    const auto c = parse_command("pow edif_adm plan_morro 20  0  24 24 0 -87", "42");
    CHECK(c.verb == Verb::Pow);
    CHECK(c.owner == "42");
    const auto& a = std::get<PowArgs>(c.args);
    CHECK(a.tx == "edif_adm");
    CHECK(a.rx == "plan_morro");
    CHECK(a.radio.tx_power_dbm == 20);
    CHECK(a.radio.tx_cable_loss_db == 0);
    CHECK(a.radio.tx_antenna_gain_dbi == 24);
    CHECK(a.radio.rx_antenna_gain_dbi == 24);
    CHECK(a.radio.rx_cable_loss_db == 0);
    CHECK(a.radio.rx_sensitivity_dbm == -87);
    CHECK_FALSE(a.frequency_mhz);
  }

  TEST_CASE("calc with options") {
    const auto c = parse_command("calc edif_adm plan_morro 50 6 5815 k=1 model=ke");
    const auto& a = std::get<LinkArgs>(c.args);
    CHECK(a.tx_antenna_m == 50.0);
    CHECK(a.rx_antenna_m == 6.0);
    CHECK(a.frequency_mhz == 5815.0);
    CHECK(a.k_factor == 1.0);
    CHECK(a.model == LossModel::KnifeEdge);
    CHECK(std::get<LinkArgs>(parse_command("calc a b 1 2 3 MODEL=ITM").args).model == LossModel::Itm);
  }

  TEST_CASE("rep forms") {
    CHECK(std::get<LinkArgs>(parse_command("rep").args).tx.empty());
    const auto two = std::get<LinkArgs>(parse_command("rep a b").args);
    CHECK(two.tx == "a");
    CHECK_FALSE(two.frequency_mhz);
    CHECK(std::get<LinkArgs>(parse_command("rep a b 1 2 900").args).frequency_mhz == 900.0);
    CHECK(error_kind("rep a") == CommandError::Kind::Arity);
  }

  TEST_CASE("site, list, cnv, help") {
    const auto s = std::get<SiteArgs>(parse_command("site edif_adm 8.5931 -71.1469").args);
    CHECK(s.name == "edif_adm");
    CHECK(s.lat_deg == 8.5931);
    CHECK(s.lon_deg == -71.1469);
    CHECK(parse_command("list").verb == Verb::List);
    CHECK(parse_command("/LIST").verb == Verb::List);
    const auto cv = std::get<CnvArgs>(parse_command("cnv 100 mW").args);
    CHECK(cv.value == 100);
    CHECK(cv.from == units::Unit::mW);
    CHECK_FALSE(cv.to);
    const auto fs = std::get<CnvArgs>(parse_command("cnv 60 dBuV/m dBm f=5815").args);
    CHECK(fs.to == units::Unit::dBm);
    CHECK(fs.frequency_mhz == 5815.0);
    CHECK(std::get<HelpArgs>(parse_command("help pow").args).topic == Verb::Pow);
  }

  TEST_CASE("signed numbers") {
    const auto s = std::get<SiteArgs>(parse_command("site x +8.5 -71").args);
    CHECK(s.lat_deg == 8.5);
    CHECK(error_kind("site x ++8 1") == CommandError::Kind::BadArgument);
    CHECK(error_kind("site x 8e999 1") == CommandError::Kind::BadArgument);
    CHECK(error_kind("site x nan 1") == CommandError::Kind::BadArgument);
  }

  TEST_CASE("errors are classified") {
    CHECK(error_kind("") == CommandError::Kind::Empty);
    CHECK(error_kind("   ") == CommandError::Kind::Empty);
    CHECK(error_kind("frobnicate") == CommandError::Kind::UnknownVerb);
    CHECK(error_kind("calc a") == CommandError::Kind::Arity);
    CHECK(error_kind("list x") == CommandError::Kind::Arity);
    CHECK(error_kind("pow a b 1 2 3 4 5") == CommandError::Kind::Arity);
    CHECK(error_kind("calc a b 1 2 x") == CommandError::Kind::BadArgument);
    CHECK(error_kind("calc a b 1 2 3 q=1") == CommandError::Kind::BadArgument);
    CHECK(error_kind("calc a b 1 2 3 model=fspl") == CommandError::Kind::BadArgument);
    CHECK(error_kind("site a-b 1 2") == CommandError::Kind::BadArgument);
    CHECK(error_kind("cnv 1 furlong") == CommandError::Kind::BadArgument);
    CHECK(error_kind("list k=1") == CommandError::Kind::BadArgument);
  }

  TEST_CASE("error messages carry the usage line") {
    try {
      parse_command("calc a");
      FAIL("expected error");
    } catch (const CommandError& e) {
      CHECK(std::string(e.what()).find(render_usage(Verb::Calc)) != std::string::npos);
    }
  }

  TEST_CASE("usage strings themselves fail with an arity error") {
    for (auto v : {Verb::Site, Verb::Calc, Verb::Rep, Verb::Pow, Verb::Cnv, Verb::List, Verb::Help}) {
      CAPTURE(verb_name(v));
      CHECK(error_kind(render_usage(v)) == CommandError::Kind::Arity);
      CHECK(render_help().find(render_usage(v)) != std::string::npos);
      CHECK(parse_verb(verb_name(v)) == v);
    }
  }
}
