#include <atomic>
#include <csignal>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "botrf/dem.hpp"
#include "botrf/gateway.hpp"
#include "botrf/http_api.hpp"
#include "botrf/kernels.hpp"
#include "botrf/sitestore.hpp"
#include "botrf/telegram.hpp"

namespace {

std::atomic<bool> g_stop{false};

void on_signal(int) { g_stop = true; }

std::string env_or(const char* name, std::string fallback) {
  const char* v = std::getenv(name);
  return v && *v ? std::string(v) : fallback;
}

struct Paths {
  std::string dem_dir = env_or("DEM_DIR", "");
  std::string data_dir = env_or("BOTRF_DATA", "");
};

struct Engine {
  std::unique_ptr<botrf::dem::TileCache> dem;
  std::unique_ptr<botrf::SiteStore> store;
  std::unique_ptr<botrf::Gateway> gateway;

  explicit Engine(const Paths& p) {
    if (!p.dem_dir.empty()) dem = std::make_unique<botrf::dem::TileCache>(p.dem_dir);
    else spdlog::warn("no DEM directory (--dem-dir or DEM_DIR); calc and rep are unavailable");
    std::optional<std::filesystem::path> data;
    if (!p.data_dir.empty()) data = p.data_dir;
    else spdlog::warn("no data directory (--data-dir or BOTRF_DATA); sites are kept in memory only");
    store = std::make_unique<botrf::SiteStore>(data, dem.get());
    gateway = std::make_unique<botrf::Gateway>(*store, dem.get());
  }
};

void print(const botrf::Response& r, std::ostream& out) {
  out << r.body << '\n';
  for (const auto& d : r.diagnostics) out << "warning: " << d << '\n';
}

// Charts go next to the data directory (or the working directory).
void save_chart(const Engine& e, const Paths& p, const botrf::Response& r, std::ostream& out) {
  if (r.kind != botrf::ResponseKind::Chart || !r.chart_id) return;
  auto svg = e.gateway->chart(*r.chart_id);
  if (!svg) return;
  const std::filesystem::path dir = p.data_dir.empty() ? std::filesystem::current_path() : std::filesystem::path(p.data_dir);
  const auto file = dir / fmt::format("chart_{}.svg", *r.chart_id);
  std::ofstream(file, std::ios::binary) << *svg;
  out << "chart: " << file.string() << '\n';
}

std::pair<std::string, int> split_listen(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos) throw CLI::ValidationError("--listen", "expected HOST:PORT");
  return {s.substr(0, colon), std::stoi(s.substr(colon + 1))};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"botrf: terrain-aware radio link planning engine"};
  app.require_subcommand(1);
  Paths paths;
  std::string log_level = "info";
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error")->capture_default_str();

  auto* serve = app.add_subcommand("serve", "run the HTTP API (and optionally the Telegram bot)");
  std::string listen = "127.0.0.1:8080";
  bool telegram = false;
  std::string web_root;
  serve->add_option("--dem-dir", paths.dem_dir, "directory of SRTM .hgt tiles (env DEM_DIR)");
  serve->add_option("--data-dir", paths.data_dir, "site and result storage (env BOTRF_DATA)");
  serve->add_option("--listen", listen, "HOST:PORT")->capture_default_str();
  serve->add_flag("--telegram", telegram, "also run the Telegram adapter (env TELEGRAM_TOKEN)");
  serve->add_option("--web-root", web_root, "directory of static web UI files");

  auto* repl = app.add_subcommand("repl", "interactive command prompt");
  repl->add_option("--dem-dir", paths.dem_dir, "directory of SRTM .hgt tiles (env DEM_DIR)");
  repl->add_option("--data-dir", paths.data_dir, "site and result storage (env BOTRF_DATA)");

  auto* eval = app.add_subcommand("eval", "run one command and exit");
  std::string line, owner = "local";
  eval->add_option("line", line, "command line, e.g. \"list\"")->required();
  eval->add_option("--owner", owner, "owner id")->capture_default_str();
  eval->add_option("--dem-dir", paths.dem_dir, "directory of SRTM .hgt tiles (env DEM_DIR)");
  eval->add_option("--data-dir", paths.data_dir, "site and result storage (env BOTRF_DATA)");

  CLI11_PARSE(app, argc, argv);
  spdlog::set_default_logger(spdlog::stderr_color_mt("botrf"));
  spdlog::set_level(spdlog::level::from_str(log_level));
  spdlog::debug("vector kernels: {}", botrf::kernels::isa_name(botrf::kernels::active_isa()));

  try {
    Engine engine(paths);

    if (*eval) {
      const auto r = engine.gateway->handle_line(owner, line);
      print(r, std::cout);
      save_chart(engine, paths, r, std::cout);
      return r.kind == botrf::ResponseKind::Error ? 1 : 0;
    }

    if (*repl) {
      std::cout << botrf::render_help() << "> " << std::flush;
      std::string input;
      while (std::getline(std::cin, input)) {
        if (input == "quit" || input == "exit") break;
        if (!input.empty()) {
          const auto r = engine.gateway->handle_line("local", input);
          print(r, std::cout);
          save_chart(engine, paths, r, std::cout);
        }
        std::cout << "> " << std::flush;
      }
      return 0;
    }

    std::signal(SIGINT, on_signal);
    std::signal(SIGTERM, on_signal);
    const auto [host, port] = split_listen(listen);
    botrf::http::Api api(*engine.gateway);
    std::optional<std::filesystem::path> root;
    if (!web_root.empty()) root = web_root;
    botrf::http::Server server(api, root);
    server.start(host, port);

    std::thread bot;
    const auto token = env_or("TELEGRAM_TOKEN", "");
    std::unique_ptr<botrf::telegram::Adapter> adapter;
    if (telegram && token.empty()) {
      spdlog::warn("--telegram given but TELEGRAM_TOKEN is not set; Telegram adapter disabled");
    } else if (telegram) {
      botrf::telegram::AdapterOptions opts;
      adapter = std::make_unique<botrf::telegram::Adapter>(
          *engine.gateway, botrf::telegram::make_https_transport(token, opts.poll_timeout_s), opts);
      adapter->check_token();
      bot = std::thread([&] { adapter->run(g_stop); });
    }

    while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(200));
    spdlog::info("shutting down");
    server.stop();
    if (bot.joinable()) bot.join();
    return 0;
  } catch (const botrf::telegram::AuthError& e) {
    spdlog::critical("{}", e.what());
    return 2;
  } catch (const std::exception& e) {
    spdlog::critical("{}", e.what());
    return 1;
  }
}
