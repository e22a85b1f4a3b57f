#include <httplib.h>

#include <fmt/format.h>

#include "botrf/telegram.hpp"

namespace botrf::telegram {

namespace {

class HttpsTransport final : public Transport {
 public:
  HttpsTransport(std::string token, int poll_timeout_s)
      : token_(std::move(token)), client_("api.telegram.org", 443) {
    client_.set_connection_timeout(10);
    client_.set_read_timeout(poll_timeout_s + 15);
    client_.enable_server_certificate_verification(true);
  }

  TransportResult call(const std::string& method, const std::string& json_body) override {
    auto res = client_.Post(path(method), json_body, "application/json");
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }

  TransportResult send_document(std::int64_t chat_id, const std::string& filename, const std::string& content,
                                const std::string& mime, const std::string& caption) override {
    httplib::MultipartFormDataItems items = {
        {"chat_id", std::to_string(chat_id), "", ""},
        {"document", content, filename, mime},
    };
    if (!caption.empty()) items.push_back({"caption", caption, "", ""});
    auto res = client_.Post(path("sendDocument"), items);
    if (!res) return {0, httplib::to_string(res.error())};
    return {res->status, res->body};
  }

 private:
  std::string path(const std::string& method) const { return fmt::format("/bot{}/{}", token_, method); }

  std::string token_;
  httplib::SSLClient client_;
};

}  // namespace

std::shared_ptr<Transport> make_https_transport(const std::string& token, int poll_timeout_s) {
  return std::make_shared<HttpsTransport>(token, poll_timeout_s);
}

}  // namespace botrf::telegram
