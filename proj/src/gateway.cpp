#include "botrf/gateway.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdint>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "botrf/charts.hpp"
#include "botrf/errors.hpp"

namespace botrf {

std::string_view response_kind_name(ResponseKind k) noexcept {
  switch (k) {
    case ResponseKind::Text: return "TEXT";
    case ResponseKind::Report: return "REPORT";
    case ResponseKind::Chart: return "CHART";
    case ResponseKind::Error: return "ERROR";
  }
  return "?";
}

namespace {

std::string fnv1a_hex(std::string_view s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return fmt::format("{:016x}", h);
}

Response error(std::string message) { return Response{ResponseKind::Error, std::move(message), std::nullopt, {}}; }

std::string elevation_text(const Site& s) {
  return s.ground_elevation_m ? fmt::format("{:.0f} m", round_to(*s.ground_elevation_m, 0)) : "unknown";
}

Timestamp now_seconds() { return std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()); }

}  // namespace

Gateway::Gateway(SiteStore& store, const ElevationModel* dem, GatewayOptions options)
    : store_(store), dem_(dem), options_(std::move(options)) {}

std::shared_ptr<std::mutex> Gateway::owner_mutex(const std::string& owner) {
  std::lock_guard lock(owners_mutex_);
  auto& m = owner_mutexes_[owner];
  if (!m) m = std::make_shared<std::mutex>();
  return m;
}

Response Gateway::handle_line(std::string_view owner, std::string_view line) {
  try {
    return dispatch(parse_command(line, owner));
  } catch (const CommandError& e) {
    return error(e.what());
  }
}

Response Gateway::dispatch(const Command& c) {
  auto m = owner_mutex(c.owner);
  std::lock_guard lock(*m);
  try {
    switch (c.verb) {
      case Verb::Site: return do_site(c, std::get<SiteArgs>(c.args));
      case Verb::Calc: return do_calc(c, std::get<LinkArgs>(c.args));
      case Verb::Rep: return do_rep(c, std::get<LinkArgs>(c.args));
      case Verb::Pow: return do_pow(c, std::get<PowArgs>(c.args));
      case Verb::Cnv: return do_cnv(std::get<CnvArgs>(c.args));
      case Verb::List: return do_list(c);
      case Verb::Help: {
        const auto& h = std::get<HelpArgs>(c.args);
        return Response{ResponseKind::Text, h.topic ? "usage: " + render_usage(*h.topic) : render_help(), {}, {}};
      }
    }
    return error("unsupported command");
  } catch (const Error& e) {
    return error(e.what());
  } catch (const std::exception& e) {
    static std::atomic<std::uint64_t> counter{0};
    const auto id = fmt::format("E{:06d}", ++counter);
    spdlog::error("internal error {} on '{}' for owner {}: {}", id, verb_name(c.verb), c.owner, e.what());
    return error(fmt::format("internal error (reference {})", id));
  }
}

Site Gateway::resolve_site(std::string_view owner, std::string_view name) const {
  auto s = store_.get_site(owner, name);
  if (!s) throw ValidationError(fmt::format("unknown site: {} (use list to see your stored sites)", name));
  return *s;
}

LinkComputation Gateway::compute_link(std::string_view owner, const LinkRequest& req) const {
  auto endpoint = [&](const Endpoint& e, const char* fallback) {
    if (const auto* name = std::get_if<std::string>(&e)) return resolve_site(owner, *name);
    Site s;
    s.owner = std::string(owner);
    s.name = fallback;
    s.point = geodesy::make_point(std::get<GeoPoint>(e).lat_deg, std::get<GeoPoint>(e).lon_deg);
    return s;
  };
  LinkComputation lc;
  lc.geometry.tx = endpoint(req.tx, "tx");
  lc.geometry.rx = endpoint(req.rx, "rx");
  lc.geometry.tx_antenna_agl_m = req.tx_antenna_m;
  lc.geometry.rx_antenna_agl_m = req.rx_antenna_m;
  lc.geometry.frequency_mhz = req.frequency_mhz;
  lc.geometry.k_factor = req.k_factor;
  lc.geometry.validate();
  if (!dem_) throw Error("no elevation data configured; start the service with --dem-dir");
  lc.profile = profile::build_profile(lc.geometry, *dem_, options_.sample_spacing_m);
  // Endpoint elevations come from the same DEM lookup as the profile.
  lc.geometry.tx.ground_elevation_m = lc.profile.terrain_m.front();
  lc.geometry.rx.ground_elevation_m = lc.profile.terrain_m.back();
  lc.profile.geometry = lc.geometry;
  lc.loss = propagation::compute_loss(lc.profile, req.model, options_.itm);
  lc.verdict = profile::analyze_clearance(lc.profile);
  return lc;
}

std::string Gateway::store_chart(std::string svg) {
  auto id = fnv1a_hex(svg);
  std::lock_guard lock(charts_mutex_);
  if (charts_.emplace(id, std::move(svg)).second) {
    chart_order_.push_back(id);
    while (chart_order_.size() > options_.chart_capacity) {
      charts_.erase(chart_order_.front());
      chart_order_.erase(chart_order_.begin());
    }
  }
  return id;
}

std::optional<std::string> Gateway::chart(std::string_view id) const {
  std::lock_guard lock(charts_mutex_);
  auto it = charts_.find(std::string(id));
  if (it == charts_.end()) return std::nullopt;
  return it->second;
}

Response Gateway::do_site(const Command& c, const SiteArgs& a) {
  const auto s = store_.put_site(c.owner, a.name, GeoPoint{a.lat_deg, a.lon_deg});
  Response r{ResponseKind::Text,
             fmt::format("site {} stored: {}, elevation {}", s.name, format_location(s.point), elevation_text(s)),
             {},
             {}};
  if (!s.ground_elevation_m) {
    r.diagnostics.push_back(
        dem_ ? fmt::format("elevation unknown: tile {}.hgt not found in the DEM directory", dem::tile_name_for(s.point))
             : std::string("elevation unknown: no DEM directory configured"));
  }
  return r;
}

LinkRequest Gateway::complete_link(const std::string& owner, const LinkArgs& a) const {
  LinkRequest req;
  if (a.tx.empty()) {
    std::optional<StoredResult> latest;
    {
      std::lock_guard lock(last_mutex_);
      if (auto it = last_pair_.find(owner); it != last_pair_.end())
        latest = store_.last_result(owner, it->second.first, it->second.second);
    }
    if (!latest) {
      // After a restart: newest persisted result for this owner.
      for (const auto& r : store_.all_results())
        if (r.owner == owner && (!latest || r.computed_at > latest->computed_at)) latest = r;
    }
    if (!latest) throw ValidationError("no previous calc; run calc first or give the link: " + render_usage(Verb::Rep));
    req = LinkRequest{latest->tx, latest->rx, latest->tx_antenna_m, latest->rx_antenna_m, latest->frequency_mhz,
                      latest->k_factor, latest->model};
  } else if (!a.frequency_mhz) {
    auto last = store_.last_result(owner, a.tx, a.rx);
    if (!last)
      throw ValidationError(fmt::format("no previous calc for {} -> {}; give heights and frequency: {}", a.tx, a.rx,
                                        render_usage(Verb::Rep)));
    req = LinkRequest{a.tx, a.rx, last->tx_antenna_m, last->rx_antenna_m, last->frequency_mhz, last->k_factor,
                      last->model};
  } else {
    req = LinkRequest{a.tx, a.rx, *a.tx_antenna_m, *a.rx_antenna_m, *a.frequency_mhz, kDefaultKFactor, LossModel::Itm};
  }
  if (a.k_factor) req.k_factor = *a.k_factor;
  if (a.model) req.model = *a.model;
  return req;
}

void Gateway::remember(const std::string& owner, const LinkRequest& req, const LinkComputation& lc) {
  store_.put_result(StoredResult{owner, std::get<std::string>(req.tx), std::get<std::string>(req.rx), req.model,
                                 req.frequency_mhz, req.k_factor, req.tx_antenna_m, req.rx_antenna_m, lc.loss.fspl_db,
                                 lc.loss.model_loss_db, now_seconds()});
  std::lock_guard lock(last_mutex_);
  last_pair_[owner] = {std::get<std::string>(req.tx), std::get<std::string>(req.rx)};
}

Response Gateway::do_calc(const Command& c, const LinkArgs& a) {
  const auto req = complete_link(c.owner, a);
  const auto lc = compute_link(c.owner, req);
  auto svg = charts::render_profile_chart(lc.profile, lc.verdict);
  const auto& v = lc.verdict;
  std::string body = fmt::format("{} -> {}: {:.2f} km, first Fresnel zone {} (worst clearance {:.2f} F1 at {:.2f} km); "
                                 "{} path loss {:.2f} dB",
                                 lc.geometry.tx.name, lc.geometry.rx.name, round_to(lc.profile.total_km, 2),
                                 profile::clearance_class_name(v.cls), round_to(v.worst_fraction, 2),
                                 round_to(v.worst_distance_km, 2), model_label(lc.loss.model),
                                 round_to(lc.loss.model_loss_db, 2));
  remember(c.owner, req, lc);
  Response r{ResponseKind::Chart, std::move(body), store_chart(std::move(svg)), lc.loss.warnings};
  return r;
}

Response Gateway::do_rep(const Command& c, const LinkArgs& a) {
  const auto req = complete_link(c.owner, a);
  const auto lc = compute_link(c.owner, req);
  auto rep = generate_report(lc.geometry, lc.profile, lc.loss, lc.verdict);
  remember(c.owner, req, lc);
  return Response{ResponseKind::Report, std::move(rep.text), {}, lc.loss.warnings};
}

BudgetComputation Gateway::compute_budget(std::string_view owner, std::string_view tx, std::string_view rx,
                                          const RadioParams& radio, std::optional<double> frequency_mhz) const {
  BudgetComputation bc;
  bc.tx = resolve_site(owner, tx);
  bc.rx = resolve_site(owner, rx);
  radio.validate();
  bc.distance_km = geodesy::distance_km(bc.tx.point, bc.rx.point);
  double loss = 0;
  if (frequency_mhz) {
    bc.frequency_mhz = *frequency_mhz;
    if (bc.frequency_mhz < kMinFrequencyMhz || bc.frequency_mhz > kMaxFrequencyMhz)
      throw UnsupportedFrequencyError(fmt::format("frequency {} MHz is outside {}-{} MHz", bc.frequency_mhz,
                                                  kMinFrequencyMhz, kMaxFrequencyMhz));
    loss = propagation::fspl_db(bc.distance_km, bc.frequency_mhz);
  } else {
    auto last = store_.last_result(owner, tx, rx);
    if (!last)
      throw ValidationError(fmt::format("no calc result for {} -> {} yet; run calc first or add f=<MHz>", tx, rx));
    bc.frequency_mhz = last->frequency_mhz;
    loss = last->fspl_db;
  }
  bc.budget = linkbudget::budget(radio, loss);
  bc.series = linkbudget::power_along_path(radio, bc.distance_km, bc.frequency_mhz, loss);
  return bc;
}

Response Gateway::do_pow(const Command& c, const PowArgs& a) {
  const auto bc = compute_budget(c.owner, a.tx, a.rx, a.radio, a.frequency_mhz);
  const auto& b = bc.budget;
  auto svg = charts::render_power_chart(bc.series, b);
  std::string body = fmt::format(
      "Link budget {} -> {} ({:.2f} km, {} MHz)\n"
      "EIRP: {:.2f} dBm\n"
      "Free space path loss: {:.2f} dB\n"
      "Received power: {:.2f} dBm\n"
      "Receiver sensitivity: {:.2f} dBm\n"
      "Link margin: {:.0f} dB ({:.2f} dB)",
      bc.tx.name, bc.rx.name, round_to(bc.distance_km, 2), bc.frequency_mhz, round_to(b.eirp_dbm, 2),
      round_to(b.path_loss_db, 2), round_to(b.rx_power_dbm, 2), a.radio.rx_sensitivity_dbm, round_to(b.margin_db, 0),
      round_to(b.margin_db, 2));
  Response r{ResponseKind::Chart, std::move(body), store_chart(std::move(svg)), {}};
  if (b.margin_db < 0) r.diagnostics.push_back("negative link margin: received power is below the sensitivity");
  return r;
}

Response Gateway::do_cnv(const CnvArgs& a) const {
  const auto to = a.to.value_or(units::default_target(a.from));
  const auto q = units::convert(units::Quantity{a.value, a.from}, to, a.frequency_mhz);
  return Response{ResponseKind::Text,
                  fmt::format("{} {} = {:.6g} {}", a.value, units::unit_name(a.from), q.value, units::unit_name(q.unit)),
                  {},
                  {}};
}

Response Gateway::do_list(const Command& c) const {
  const auto sites = store_.list_sites(c.owner);
  if (sites.empty()) return Response{ResponseKind::Text, "no sites stored yet; add one with: site <name> <lat> <lon>", {}, {}};
  std::string body;
  for (const auto& s : sites)
    body += fmt::format("{}: {}, elevation {}\n", s.name, format_location(s.point), elevation_text(s));
  body.pop_back();
  return Response{ResponseKind::Text, std::move(body), {}, {}};
}

}  // namespace botrf
