#include <doctest.h>

#include <deque>

#include <json.hpp>

#include "botrf/telegram.hpp"
#include "support.hpp"

using namespace botrf;
using nlohmann::json;

namespace {

class FakeTransport final : public telegram::Transport {
 public:
  std::deque<telegram::TransportResult> updates;
  int getme_status = 200;
  std::vector<json> sent;  // sendMessage bodies
  struct Doc {
    std::int64_t chat;
    std::string filename, content, mime, caption;
  };
  std::vector<Doc> docs;
  std::vector<json> polls;
  std::atomic<bool>* stop_when_drained = nullptr;

  telegram::TransportResult call(const std::string& method, const std::string& body) override {
    if (method == "getMe")
      return {getme_status, getme_status == 200 ? R"({"ok":true,"result":{"username":"botrf"}})" : R"({"ok":false})"};
    if (method == "getUpdates") {
      polls.push_back(json::parse(body));
      if (updates.empty()) {
        if (stop_when_drained) *stop_when_drained = true;
        return {200, R"({"ok":true,"result":[]})"};
      }
      auto r = updates.front();
      updates.pop_front();
      return r;
    }
    if (method == "sendMessage") sent.push_back(json::parse(body));
    return {200, R"({"ok":true})"};
  }

  telegram::TransportResult send_document(std::int64_t chat, const std::string& filename, const std::string& content,
                                          const std::string& mime, const std::string& caption) override {
    docs.push_back({chat, filename, content, mime, caption});
    return {200, R"({"ok":true})"};
  }

  void push(std::int64_t id, const json& message) {
    updates.push_back({200, json{{"ok", true}, {"result", {{{"update_id", id}, {"message", message}}}}}.dump()});
  }
};

json text_message(std::int64_t chat, const std::string& text) {
  return {{"chat", {{"id", chat}}}, {"text", text}};
}

json location_message(std::int64_t chat, double lat, double lon) {
  return {{"chat", {{"id", chat}}}, {"location", {{"latitude", lat}, {"longitude", lon}}}};
}

struct Fixture {
  SiteStore store;
  Gateway gw{store, nullptr};
  std::shared_ptr<FakeTransport> fake = std::make_shared<FakeTransport>();
  std::vector<std::chrono::milliseconds> sleeps;
  telegram::Adapter adapter{gw, fake, {}, [this](std::chrono::milliseconds d) { sleeps.push_back(d); }};

  std::string last_text() const { return fake->sent.empty() ? "" : fake->sent.back()["text"].get<std::string>(); }
};

}  // namespace

TEST_SUITE("telegram") {
  TEST_CASE("text commands use the chat id as owner") {
    Fixture f;
    f.store.put_site("77", "edif_adm", testing::kEdifAdm);
    f.fake->push(10, text_message(77, "list"));
    CHECK(f.adapter.poll_once());
    CHECK(f.adapter.next_offset() == 11);
    CHECK(f.last_text().find("edif_adm: ") != std::string::npos);
    CHECK(f.fake->sent.back()["chat_id"] == 77);
    f.fake->push(11, text_message(78, "/list"));
    f.adapter.poll_once();
    CHECK(f.last_text().find("no sites stored yet") != std::string::npos);
    CHECK(f.fake->polls.back()["offset"] == 11);
    CHECK(f.adapter.next_offset() == 12);
  }

  TEST_CASE("a shared location is named by the next message") {
    Fixture f;
    f.fake->push(1, location_message(5, 8.5931, -71.1469));
    f.adapter.poll_once();
    CHECK(f.last_text().find("name this site:") != std::string::npos);
    f.fake->push(2, text_message(5, "edif_adm"));
    f.adapter.poll_once();
    CHECK(f.last_text().find("site edif_adm stored") != std::string::npos);
    const auto s = f.store.get_site("5", "edif_adm");
    REQUIRE(s);
    CHECK(s->point.lat_deg == 8.5931);
    f.fake->push(3, text_message(5, "other"));
    f.adapter.poll_once();
    CHECK(f.last_text().find("unknown command") != std::string::npos);
  }

  TEST_CASE("a verb after a location is still a command") {
    Fixture f;
    f.fake->push(1, location_message(5, 1, 2));
    f.fake->push(2, text_message(5, "list"));
    f.adapter.poll_once();
    f.adapter.poll_once();
    CHECK(f.last_text().find("no sites stored yet") != std::string::npos);
  }

  TEST_CASE("start sends help") {
    Fixture f;
    f.fake->push(1, text_message(5, "/start"));
    f.adapter.poll_once();
    CHECK(f.last_text().find("pow <tx> <rx>") != std::string::npos);
  }

  TEST_CASE("charts go out as documents") {
    Fixture f;
    f.store.put_site("9", "a", {0, 0});
    f.store.put_site("9", "b", {0, 0.1});
    f.fake->push(1, text_message(9, "pow a b 20 0 24 24 0 -87 f=5815"));
    f.adapter.poll_once();
    REQUIRE(f.fake->docs.size() == 1);
    const auto& d = f.fake->docs[0];
    CHECK(d.chat == 9);
    CHECK(d.mime == "image/svg+xml");
    CHECK(d.filename.starts_with("chart_"));
    CHECK(d.content.find("<svg") != std::string::npos);
    CHECK(d.caption.find("EIRP: 44.00 dBm") != std::string::npos);
  }

  TEST_CASE("failures back off exponentially and recover") {
    Fixture f;
    std::atomic<bool> stop{false};
    for (int i = 0; i < 9; ++i) f.fake->updates.push_back({0, ""});
    f.fake->updates.push_back({502, "bad gateway"});
    f.fake->updates.push_back({200, "not json"});
    f.fake->push(1, text_message(1, "list"));
    f.fake->stop_when_drained = &stop;
    f.adapter.run(stop);
    CHECK(f.fake->sent.size() == 1);
    REQUIRE(f.sleeps.size() == 11);
    CHECK(f.sleeps[0] == std::chrono::milliseconds(500));
    CHECK(f.sleeps[1] == std::chrono::milliseconds(1000));
    CHECK(f.sleeps[2] == std::chrono::milliseconds(2000));
    CHECK(f.sleeps.back() == std::chrono::milliseconds(60000));
    CHECK(std::is_sorted(f.sleeps.begin(), f.sleeps.end()));
    CHECK(f.adapter.consecutive_failures() == 0);
  }

  TEST_CASE("a rejected token is an auth error") {
    Fixture f;
    CHECK_NOTHROW(f.adapter.check_token());
    f.fake->getme_status = 401;
    CHECK_THROWS_AS(f.adapter.check_token(), telegram::AuthError);
    f.fake->getme_status = 0;
    try {
      f.adapter.check_token();
      FAIL("expected error");
    } catch (const telegram::AuthError&) {
      FAIL("network failure is not an auth error");
    } catch (const Error&) {
    }
  }

  TEST_CASE("long replies are chunked") {
    Fixture f;
    for (int i = 0; i < 200; ++i) f.store.put_site("3", "site_with_a_long_name_" + std::to_string(i), {i * 0.1, 0});
    f.fake->push(1, text_message(3, "list"));
    f.adapter.poll_once();
    REQUIRE(f.fake->sent.size() >= 2);
    for (const auto& m : f.fake->sent) CHECK(m["text"].get<std::string>().size() <= 4096);
  }

  TEST_CASE("malformed updates are skipped") {
    Fixture f;
    f.fake->updates.push_back({200, R"({"ok":true,"result":[{"update_id":4},{"update_id":5,"message":{"chat":{}}}]})"});
    CHECK(f.adapter.poll_once());
    CHECK(f.adapter.next_offset() == 6);
    CHECK(f.fake->sent.empty());
  }
}
