#include "botrf/http_api.hpp"

#include <atomic>
#include <cmath>

#include <fmt/format.h>
#include <httplib.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "botrf/charts.hpp"
#include "botrf/errors.hpp"

namespace botrf::http {

using nlohmann::json;

namespace {

// Collects field problems so a bad body is reported in one go.
class Fields {
 public:
  explicit Fields(const json& body) : body_(body) {}

  std::optional<double> number(const std::string& key, bool required = true) {
    if (!body_.contains(key) || body_[key].is_null()) {
      if (required) errors_[key] = "required number";
      return std::nullopt;
    }
    if (!body_[key].is_number()) {
      errors_[key] = "must be a number";
      return std::nullopt;
    }
    const double v = body_[key].get<double>();
    if (!std::isfinite(v)) {
      errors_[key] = "must be finite";
      return std::nullopt;
    }
    return v;
  }

  std::optional<std::string> string(const std::string& key, bool required = true) {
    if (!body_.contains(key) || body_[key].is_null()) {
      if (required) errors_[key] = "required string";
      return std::nullopt;
    }
    if (!body_[key].is_string()) {
      errors_[key] = "must be a string";
      return std::nullopt;
    }
    return body_[key].get<std::string>();
  }

  std::optional<Endpoint> endpoint(const std::string& key) {
    if (!body_.contains(key)) {
      errors_[key] = "required: site name or {lat, lon}";
      return std::nullopt;
    }
    const auto& v = body_[key];
    if (v.is_string()) return Endpoint{v.get<std::string>()};
    if (v.is_object() && v.contains("lat") && v.contains("lon") && v["lat"].is_number() && v["lon"].is_number())
      return Endpoint{GeoPoint{v["lat"].get<double>(), v["lon"].get<double>()}};
    errors_[key] = "must be a site name or {lat, lon}";
    return std::nullopt;
  }

  void fail(const std::string& key, std::string message) { errors_[key] = std::move(message); }
  bool ok() const { return errors_.empty(); }
  const json& errors() const { return errors_; }

 private:
  const json& body_;
  json errors_ = json::object();
};

Reply json_reply(int status, const json& j) { return Reply{status, "application/json", j.dump()}; }

Reply field_errors(const json& errors) {
  return json_reply(400, json{{"error", "invalid request"}, {"fields", errors}});
}

Reply user_error(const std::string& message) { return json_reply(422, json{{"error", message}}); }

json nullable(const std::vector<double>& v) {
  json out = json::array();
  for (double x : v) out.push_back(std::isfinite(x) ? json(x) : json(nullptr));
  return out;
}

std::string owner_of(const json& body) {
  if (body.contains("owner") && body["owner"].is_string() && !body["owner"].get<std::string>().empty())
    return body["owner"].get<std::string>();
  return "local";
}

std::optional<LinkRequest> link_request(const json& body, Fields& f) {
  LinkRequest r;
  auto tx = f.endpoint("tx");
  auto rx = f.endpoint("rx");
  auto txh = f.number("tx_h");
  auto rxh = f.number("rx_h");
  auto freq = f.number("freq_mhz");
  auto k = f.number("k", false);
  auto model = f.string("model", false);
  if (model && !parse_model(*model)) f.fail("model", "must be itm, ke or fspl");
  if (!f.ok()) return std::nullopt;
  r.tx = *tx;
  r.rx = *rx;
  r.tx_antenna_m = *txh;
  r.rx_antenna_m = *rxh;
  r.frequency_mhz = *freq;
  if (k) r.k_factor = *k;
  if (model) r.model = *parse_model(*model);
  (void)body;
  return r;
}

json site_json(const Site& s) {
  return json{{"owner", s.owner},
              {"name", s.name},
              {"lat", s.point.lat_deg},
              {"lon", s.point.lon_deg},
              {"elevation_m", s.ground_elevation_m ? json(*s.ground_elevation_m) : json(nullptr)},
              {"location", format_location(s.point)},
              {"created_at", format_timestamp(s.created_at)}};
}

json response_json(const Response& r) {
  json j{{"kind", response_kind_name(r.kind)}, {"body", r.body}, {"diagnostics", r.diagnostics}};
  if (r.chart_id) {
    j["chart_id"] = *r.chart_id;
    j["chart_url"] = "/api/chart/" + *r.chart_id;
  }
  return j;
}

json budget_json(const LinkBudget& b) {
  return json{{"eirp_dbm", b.eirp_dbm},
              {"path_loss_db", b.path_loss_db},
              {"rx_power_dbm", b.rx_power_dbm},
              {"margin_db", b.margin_db},
              {"margin_rounded_db", round_to(b.margin_db, 0)}};
}

json series_json(const std::vector<PowerSample>& s) {
  json d = json::array(), l = json::array();
  for (const auto& p : s) {
    d.push_back(p.distance_km);
    l.push_back(p.level_dbm);
  }
  return json{{"distance_km", d}, {"level_dbm", l}};
}

}  // namespace

Reply Api::handle(const Request& req) {
  try {
    return route(req);
  } catch (const json::exception& e) {
    return field_errors(json{{"body", std::string("malformed JSON: ") + e.what()}});
  } catch (const Error& e) {
    return user_error(e.what());
  } catch (const std::exception& e) {
    static std::atomic<std::uint64_t> counter{0};
    const auto id = fmt::format("H{:06d}", ++counter);
    spdlog::error("internal error {} on {} {}: {}", id, req.method, req.path, e.what());
    return json_reply(500, json{{"error", "internal error"}, {"id", id}});
  }
}

Reply Api::route(const Request& req) {
  if (req.method == "GET" && req.path == "/healthz") return Reply{200, "text/plain", "ok"};

  if (req.method == "GET" && req.path == "/api/sites") {
    auto it = req.query.find("owner");
    const std::string owner = it == req.query.end() || it->second.empty() ? "local" : it->second;
    json out = json::array();
    for (const auto& s : gateway_.store().list_sites(owner)) out.push_back(site_json(s));
    return json_reply(200, json{{"owner", owner}, {"sites", out}});
  }

  constexpr std::string_view chart_prefix = "/api/chart/";
  if (req.method == "GET" && req.path.starts_with(chart_prefix)) {
    auto svg = gateway_.chart(std::string_view(req.path).substr(chart_prefix.size()));
    if (!svg) return json_reply(404, json{{"error", "chart not found"}});
    return Reply{200, "image/svg+xml", *svg};
  }

  if (req.method != "POST") {
    return json_reply(404, json{{"error", fmt::format("no route for {} {}", req.method, req.path)}});
  }

  const json body = req.body.empty() ? json::object() : json::parse(req.body);
  if (!body.is_object()) return field_errors(json{{"body", "must be a JSON object"}});
  Fields f(body);

  if (req.path == "/api/command") {
    auto line = f.string("line");
    if (!f.ok()) return field_errors(f.errors());
    const auto r = gateway_.handle_line(owner_of(body), *line);
    return json_reply(200, response_json(r));
  }

  if (req.path == "/api/sites") {
    auto name = f.string("name");
    auto lat = f.number("lat");
    auto lon = f.number("lon");
    if (!f.ok()) return field_errors(f.errors());
    const auto s = gateway_.store().put_site(owner_of(body), *name, GeoPoint{*lat, *lon});
    return json_reply(200, site_json(s));
  }

  if (req.path == "/api/convert") {
    auto value = f.number("value");
    auto from = f.string("from");
    auto to = f.string("to", false);
    auto freq = f.number("freq_mhz", false);
    std::optional<units::Unit> ufrom, uto;
    if (from && !(ufrom = units::parse_unit(*from))) f.fail("from", "unknown unit");
    if (to && !(uto = units::parse_unit(*to))) f.fail("to", "unknown unit");
    if (!f.ok()) return field_errors(f.errors());
    const auto q = units::convert(units::Quantity{*value, *ufrom}, uto.value_or(units::default_target(*ufrom)), freq);
    return json_reply(200, json{{"value", q.value}, {"unit", units::unit_name(q.unit)}});
  }

  if (req.path == "/api/profile" || req.path == "/api/report") {
    auto lr = link_request(body, f);
    if (!lr) return field_errors(f.errors());
    const auto lc = gateway_.compute_link(owner_of(body), *lr);
    const auto& p = lc.profile;
    const auto& v = lc.verdict;
    json loss{{"fspl_db", lc.loss.fspl_db},
              {"model_loss_db", lc.loss.model_loss_db},
              {"shielding_db", lc.loss.shielding_db},
              {"shielding_rounded_db", round_to(lc.loss.model_loss_db - lc.loss.fspl_db, 2)},
              {"model", model_name(lc.loss.model)},
              {"mode", mode_name(lc.loss.mode)},
              {"warnings", lc.loss.warnings}};
    json verdict{{"class", profile::clearance_class_name(v.cls)},
                 {"worst_fraction", v.worst_fraction},
                 {"worst_distance_km", v.worst_distance_km},
                 {"worst_index", v.worst_index}};
    if (req.path == "/api/report") {
      const auto rep = generate_report(lc.geometry, lc.profile, lc.loss, lc.verdict);
      return json_reply(200, json{{"text", rep.text},
                                  {"distance_km", rep.distance_km},
                                  {"azimuth_to_rx_deg", rep.azimuth_to_rx_deg},
                                  {"azimuth_to_tx_deg", rep.azimuth_to_tx_deg},
                                  {"tx_angle_deg", rep.tx_angle_deg},
                                  {"rx_angle_deg", rep.rx_angle_deg},
                                  {"loss", loss},
                                  {"verdict", verdict}});
    }
    std::vector<double> lower(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) lower[i] = p.los_m[i] - p.fresnel1_m[i];
    const auto chart_id = gateway_.store_chart(charts::render_profile_chart(p, v));
    return json_reply(200, json{{"total_km", p.total_km},
                                {"sample_spacing_m", p.sample_spacing_m},
                                {"distance_km", p.distance_km},
                                {"terrain_m", p.terrain_m},
                                {"bulge_m", p.bulge_m},
                                {"los_m", p.los_m},
                                {"fresnel1_m", p.fresnel1_m},
                                {"fresnel_lower_m", lower},
                                {"clearance_fraction", nullable(p.clearance_fraction)},
                                {"verdict", verdict},
                                {"loss", loss},
                                {"chart_id", chart_id},
                                {"chart_url", "/api/chart/" + chart_id}});
  }

  if (req.path == "/api/budget") {
    RadioParams radio;
    const std::pair<const char*, double RadioParams::*> keys[] = {
        {"tx_power_dbm", &RadioParams::tx_power_dbm},
        {"tx_cable_loss_db", &RadioParams::tx_cable_loss_db},
        {"tx_antenna_gain_dbi", &RadioParams::tx_antenna_gain_dbi},
        {"rx_antenna_gain_dbi", &RadioParams::rx_antenna_gain_dbi},
        {"rx_cable_loss_db", &RadioParams::rx_cable_loss_db},
        {"rx_sensitivity_dbm", &RadioParams::rx_sensitivity_dbm}};
    for (const auto& [key, member] : keys)
      if (auto v = f.number(key)) radio.*member = *v;
    auto loss = f.number("path_loss_db", false);
    auto tx = f.string("tx", false);
    auto rx = f.string("rx", false);
    auto freq = f.number("freq_mhz", false);
    auto dist = f.number("distance_km", false);
    if (!loss && !(tx && rx)) f.fail("path_loss_db", "give path_loss_db or tx and rx site names");
    if (!f.ok()) return field_errors(f.errors());

    json out;
    std::vector<PowerSample> series;
    LinkBudget b;
    if (loss) {
      radio.validate();
      b = linkbudget::budget(radio, *loss);
      if (dist && freq) series = linkbudget::power_along_path(radio, *dist, *freq, *loss);
    } else {
      const auto bc = gateway_.compute_budget(owner_of(body), *tx, *rx, radio, freq);
      b = bc.budget;
      series = bc.series;
      out["distance_km"] = bc.distance_km;
      out["freq_mhz"] = bc.frequency_mhz;
    }
    out["budget"] = budget_json(b);
    if (!series.empty()) {
      out["series"] = series_json(series);
      const auto id = gateway_.store_chart(charts::render_power_chart(series, b));
      out["chart_id"] = id;
      out["chart_url"] = "/api/chart/" + id;
    }
    return json_reply(200, out);
  }

  return json_reply(404, json{{"error", fmt::format("no route for {} {}", req.method, req.path)}});
}

struct Server::Impl {
  Api& api;
  httplib::Server server;
  std::thread thread;
};

Server::Server(Api& api, std::optional<std::filesystem::path> web_root) : impl_(new Impl{api, {}, {}}) {
  auto forward = [this](const httplib::Request& hreq, httplib::Response& hres) {
    Request req{hreq.method, hreq.path, {}, hreq.body};
    for (const auto& [k, v] : hreq.params) req.query.emplace(k, v);
    const auto reply = impl_->api.handle(req);
    hres.status = reply.status;
    hres.set_content(reply.body, reply.content_type);
  };
  impl_->server.Get("/healthz", forward);
  impl_->server.Get("/api/.*", forward);
  impl_->server.Post("/api/.*", forward);
  if (web_root && !impl_->server.set_mount_point("/", web_root->string()))
    spdlog::warn("web root {} is not a directory; static files disabled", web_root->string());
}

Server::~Server() { stop(); }

int Server::start(const std::string& host, int port) {
  int bound = port == 0 ? impl_->server.bind_to_any_port(host) : (impl_->server.bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(fmt::format("cannot listen on {}:{}", host, port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  spdlog::info("HTTP API listening on {}:{}", host, bound);
  return bound;
}

void Server::stop() {
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

void Server::wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace botrf::http
