#include "botrf/telegram.hpp"

#include <algorithm>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "botrf/report.hpp"

namespace botrf::telegram {

using nlohmann::json;

#ifndef BOTRF_WITH_TELEGRAM
std::shared_ptr<Transport> make_https_transport(const std::string&, int) {
  throw Error("this build has no HTTPS support; reconfigure with BOTRF_WITH_TELEGRAM=ON");
}
#endif

namespace {

constexpr std::size_t kMaxMessage = 4096;
constexpr std::size_t kMaxCaption = 1024;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

Adapter::Adapter(Gateway& gateway, std::shared_ptr<Transport> transport, AdapterOptions options, SleepFn sleep)
    : gateway_(gateway), transport_(std::move(transport)), options_(options), sleep_(std::move(sleep)) {
  if (!sleep_) sleep_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
}

void Adapter::check_token() {
  const auto r = transport_->call("getMe", "{}");
  if (r.status == 401 || r.status == 404)
    throw AuthError("Telegram rejected the bot token (unauthorized); check TELEGRAM_TOKEN");
  if (r.status != 200) throw Error(fmt::format("Telegram API unreachable (status {})", r.status));
  const auto j = json::parse(r.body, nullptr, false);
  if (j.is_discarded() || !j.value("ok", false)) throw Error("Telegram getMe returned an unexpected body");
  spdlog::info("Telegram bot @{} connected", j["result"].value("username", "?"));
}

bool Adapter::poll_once() {
  const json req{{"offset", offset_}, {"timeout", options_.poll_timeout_s}, {"allowed_updates", {"message"}}};
  const auto r = transport_->call("getUpdates", req.dump());
  if (r.status != 200) {
    spdlog::warn("getUpdates failed (status {})", r.status);
    return false;
  }
  const auto j = json::parse(r.body, nullptr, false);
  if (j.is_discarded() || !j.value("ok", false) || !j.contains("result") || !j["result"].is_array()) {
    spdlog::warn("getUpdates returned an unexpected body");
    return false;
  }
  for (const auto& u : j["result"]) {
    if (!u.contains("update_id") || !u["update_id"].is_number_integer()) continue;
    offset_ = std::max(offset_, u["update_id"].get<std::int64_t>() + 1);
    try {
      handle_update(u.dump());
    } catch (const std::exception& e) {
      spdlog::error("update {} not handled: {}", u["update_id"].get<std::int64_t>(), e.what());
    }
  }
  return true;
}

void Adapter::run(const std::atomic<bool>& stop) {
  while (!stop.load()) {
    if (poll_once()) {
      failures_ = 0;
      continue;
    }
    ++failures_;
    auto delay = options_.initial_backoff * (1LL << std::min(failures_ - 1, 20));
    delay = std::min<std::chrono::milliseconds>(delay, options_.max_backoff);
    sleep_(delay);
  }
}

void Adapter::handle_update(const std::string& update_json) {
  const auto u = json::parse(update_json);
  if (!u.contains("message")) return;
  const auto& m = u["message"];
  if (!m.contains("chat") || !m["chat"].contains("id")) return;
  const auto chat = m["chat"]["id"].get<std::int64_t>();
  const std::string owner = std::to_string(chat);

  if (m.contains("location")) {
    const GeoPoint p{m["location"].value("latitude", 0.0), m["location"].value("longitude", 0.0)};
    if (!geodesy::is_valid(p)) {
      send_text(chat, "that location is not a valid coordinate");
      return;
    }
    pending_locations_[chat] = p;
    send_text(chat, fmt::format("{}\nname this site:", format_location(p)));
    return;
  }
  if (!m.contains("text") || !m["text"].is_string()) return;
  const auto text = trim(m["text"].get<std::string>());
  if (text.empty()) return;

  if (auto it = pending_locations_.find(chat); it != pending_locations_.end()) {
    std::string name = text;
    if (!name.empty() && name.front() == '/') name.erase(0, 1);
    if (is_valid_site_name(name) && !parse_verb(name)) {
      Command c{Verb::Site, SiteArgs{name, it->second.lat_deg, it->second.lon_deg}, owner};
      const auto r = gateway_.dispatch(c);
      if (r.kind != ResponseKind::Error) pending_locations_.erase(it);
      reply(chat, r);
      return;
    }
  }
  if (text == "/start") {
    send_text(chat, render_help());
    return;
  }
  reply(chat, gateway_.handle_line(owner, text));
}

void Adapter::reply(std::int64_t chat_id, const Response& r) {
  std::string text = r.body;
  for (const auto& d : r.diagnostics) text += "\nwarning: " + d;
  if (r.kind == ResponseKind::Chart && r.chart_id) {
    if (auto svg = gateway_.chart(*r.chart_id)) {
      const bool fits = text.size() <= kMaxCaption;
      if (!fits) send_text(chat_id, text);
      const auto res = transport_->send_document(chat_id, "chart_" + *r.chart_id + ".svg", *svg, "image/svg+xml",
                                                 fits ? text : std::string());
      if (res.status != 200) spdlog::warn("sendDocument to {} failed (status {})", chat_id, res.status);
      return;
    }
  }
  send_text(chat_id, text);
}

void Adapter::send_text(std::int64_t chat_id, const std::string& text) {
  for (std::size_t pos = 0; pos < text.size() || pos == 0; pos += kMaxMessage) {
    const json body{{"chat_id", chat_id}, {"text", text.substr(pos, kMaxMessage)}};
    const auto res = transport_->call("sendMessage", body.dump());
    if (res.status != 200) spdlog::warn("sendMessage to {} failed (status {})", chat_id, res.status);
    if (text.empty()) break;
  }
}

}  // namespace botrf::telegram
