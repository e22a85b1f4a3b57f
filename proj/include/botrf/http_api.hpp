#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "botrf/gateway.hpp"

namespace botrf::http {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct Reply {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// Routes requests to the gateway. Transport independent, so it can be
// exercised without sockets.
class Api {
 public:
  explicit Api(Gateway& gateway) : gateway_(gateway) {}
  Reply handle(const Request& req);

 private:
  Reply route(const Request& req);
  Gateway& gateway_;
};

// Listens on host:port (port 0 picks a free one) on a background thread.
class Server {
 public:
  Server(Api& api, std::optional<std::filesystem::path> web_root = std::nullopt);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Returns the bound port; throws Error when binding fails.
  int start(const std::string& host, int port);
  void stop();
  // Blocks until stop() is called from elsewhere.
  void wait();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace botrf::http
