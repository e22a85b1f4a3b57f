#pragma once

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>

#include "botrf/gateway.hpp"

namespace botrf::telegram {

// status 0 means the request never completed (DNS, TLS, timeout).
struct TransportResult {
  int status = 0;
  std::string body;
};

class Transport {
 public:
  virtual ~Transport() = default;
  // Bot API method with a JSON object body.
  virtual TransportResult call(const std::string& method, const std::string& json_body) = 0;
  virtual TransportResult send_document(std::int64_t chat_id, const std::string& filename,
                                        const std::string& content, const std::string& mime,
                                        const std::string& caption) = 0;
};

// Real transport to api.telegram.org. Throws Error when built without TLS.
std::shared_ptr<Transport> make_https_transport(const std::string& token, int poll_timeout_s);

class AuthError : public Error {
 public:
  using Error::Error;
};

struct AdapterOptions {
  int poll_timeout_s = 30;
  std::chrono::milliseconds initial_backoff{500};
  std::chrono::milliseconds max_backoff{60000};
};

using SleepFn = std::function<void(std::chrono::milliseconds)>;

class Adapter {
 public:
  Adapter(Gateway& gateway, std::shared_ptr<Transport> transport, AdapterOptions options = {}, SleepFn sleep = {});

  // getMe; throws AuthError on 401/404, Error when unreachable.
  void check_token();

  // One getUpdates round. Returns false on a transport or API failure.
  bool poll_once();

  // Polls until `stop` is set, backing off exponentially after failures.
  void run(const std::atomic<bool>& stop);

  std::int64_t next_offset() const noexcept { return offset_; }
  int consecutive_failures() const noexcept { return failures_; }

 private:
  void handle_update(const std::string& update_json);
  void reply(std::int64_t chat_id, const Response& r);
  void send_text(std::int64_t chat_id, const std::string& text);

  Gateway& gateway_;
  std::shared_ptr<Transport> transport_;
  AdapterOptions options_;
  SleepFn sleep_;
  std::int64_t offset_ = 0;
  int failures_ = 0;
  std::map<std::int64_t, GeoPoint> pending_locations_;
};

}  // namespace botrf::telegram
