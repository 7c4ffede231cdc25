#include <gtest/gtest.h>

#include <atomic>
#include <chrono>
#include <filesystem>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "proactive/error.hpp"
#include "proactive/gateway/server.hpp"
#include "proactive/gateway/server_config.hpp"
#include "proactive/runner.hpp"
#include "support.hpp"

using namespace proactive;
using namespace proactive::gateway;
using nlohmann::json;

namespace {

// FakeProvider is not thread-safe; the gateway calls providers from a pool.
class LockedProvider : public Provider {
 public:
  ProviderResponse complete(const PromptBundle& b) override {
    std::lock_guard lock(mu_);
    return inner_.complete(b);
  }
  std::string name() const override { return "fake"; }
  void set_preview(std::string code) {
    std::lock_guard lock(mu_);
    inner_.preview_code = std::move(code);
  }

 private:
  std::mutex mu_;
  proactive::testing::FakeProvider inner_;
};

class GatewayTest : public ::testing::Test {
 protected:
  void SetUp() override { start(true); }
  void TearDown() override {
    if (server) server->stop();
  }

  void start(bool with_runner) {
    if (server) server->stop();
    ServerConfig cfg;
    cfg.port = 0;
    cfg.tick = Millis{50};
    ServerDeps deps;
    provider = std::make_shared<LockedProvider>();
    provider->set_preview("x = 2\ny = 3\n");
    deps.provider = provider;
    if (with_runner) {
      RunResult err;
      err.exit_status = 1;
      err.is_error = true;
      err.stderr_text = "ZeroDivisionError: division by zero\n";
      deps.runner = std::make_shared<ScriptedRunner>(std::vector<RunResult>{err});
    }
    sink = std::make_shared<MemorySink>();
    deps.sinks = [this](const SessionId&) { return sink; };
    deps.clock = [this] { return at_ms(clock_ms.load()); };
    server = std::make_unique<Server>(cfg, std::move(deps));
    const int port = server->start();
    client = std::make_unique<httplib::Client>("127.0.0.1", port);
    client->set_read_timeout(5, 0);
  }

  json post(const std::string& path, const json& body, int expect) {
    auto r = client->Post(path, body.dump(), "application/json");
    EXPECT_TRUE(r) << path;
    if (!r) return {};
    EXPECT_EQ(r->status, expect) << path << " " << r->body;
    return r->body.empty() ? json() : json::parse(r->body);
  }
  json get(const std::string& path, int expect = 200) {
    auto r = client->Get(path);
    EXPECT_TRUE(r) << path;
    if (!r) return {};
    EXPECT_EQ(r->status, expect) << path << " " << r->body;
    return json::parse(r->body, nullptr, false);
  }
  std::string create(const std::string& condition, const std::string& code = "x = 1\ny = 2\n") {
    auto snap = post("/sessions", {{"condition", condition}, {"initial_code", code}}, 201);
    return snap.value("session_id", "");
  }
  // Polls the snapshot until `pred` holds or two seconds pass.
  json wait_for(const std::string& id, const std::function<bool(const json&)>& pred) {
    for (int i = 0; i < 200; ++i) {
      auto snap = get("/sessions/" + id);
      if (pred(snap)) return snap;
      std::this_thread::sleep_for(std::chrono::milliseconds(10));
    }
    ADD_FAILURE() << "condition not reached";
    return {};
  }

  std::atomic<std::int64_t> clock_ms{1000};
  std::shared_ptr<LockedProvider> provider;
  std::shared_ptr<MemorySink> sink;
  std::unique_ptr<Server> server;
  std::unique_ptr<httplib::Client> client;
};

}  // namespace

TEST_F(GatewayTest, HealthConditionsTasks) {
  EXPECT_EQ(get("/healthz")["status"], "ok");
  auto conds = get("/conditions");
  ASSERT_TRUE(conds.is_array());
  EXPECT_EQ(conds.size(), 4u);
  auto tasks = get("/tasks");
  ASSERT_TRUE(tasks.is_array());
  EXPECT_EQ(tasks.size(), 4u);
}

TEST_F(GatewayTest, CreateAndFetchSession) {
  const auto id = create("suggest");
  ASSERT_FALSE(id.empty());
  auto snap = get("/sessions/" + id);
  EXPECT_EQ(snap["condition"]["name"], "suggest");
  EXPECT_EQ(snap["documents"][0]["text"], "x = 1\ny = 2\n");
  EXPECT_EQ(server->session_count(), 1u);
}

TEST_F(GatewayTest, ErrorsUseUniformBody) {
  auto missing = get("/sessions/nope", 404);
  EXPECT_EQ(missing["error"]["code"], "not_found");
  EXPECT_FALSE(missing["error"]["message"].get<std::string>().empty());
  auto bad = post("/sessions", {{"condition", "imaginary"}}, 400);
  EXPECT_EQ(bad["error"]["code"], "validation");
  auto r = client->Post("/sessions", "{not json", "application/json");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 400);
}

TEST_F(GatewayTest, EditsBumpVersion) {
  const auto id = create("suggest");
  post("/sessions/" + id + "/edits", {{"text", "z = 3\n"}}, 204);
  auto snap = get("/sessions/" + id);
  EXPECT_EQ(snap["documents"][0]["version"], 2);
  EXPECT_EQ(snap["documents"][0]["text"], "z = 3\n");
  post("/sessions/" + id + "/edits", json::object(), 400);
}

TEST_F(GatewayTest, ManualRequestThenLifecycle) {
  const auto id = create("suggest");
  post("/sessions/" + id + "/suggestions/request", json::object(), 202);
  clock_ms += 2000;  // lets the fake provider's latency elapse on the session clock
  auto snap = wait_for(id, [](const json& s) { return s["suggestions"].size() == 3; });
  const std::string sid = snap["suggestions"][0]["suggestion_id"];
  post("/sessions/" + id + "/suggestions/" + sid + "/accept", json::object(), 409);
  post("/sessions/" + id + "/suggestions/" + sid + "/expand", json::object(), 204);
  post("/sessions/" + id + "/suggestions/" + sid + "/copy", json::object(), 204);
  post("/sessions/" + id + "/suggestions/" + sid + "/accept", json::object(), 204);
  post("/sessions/" + id + "/suggestions/clear", json::object(), 204);
  snap = get("/sessions/" + id);
  for (const auto& s : snap["suggestions"]) EXPECT_NE(s["state"], "collapsed");
}

TEST_F(GatewayTest, PreviewOnlyInPreviewCondition) {
  const auto plain = create("suggest");
  post("/sessions/" + plain + "/suggestions/request", json::object(), 202);
  auto snap = wait_for(plain, [](const json& s) { return !s["suggestions"].empty(); });
  const std::string sid = snap["suggestions"][0]["suggestion_id"];
  auto err = post("/sessions/" + plain + "/suggestions/" + sid + "/preview", json::object(), 409);
  EXPECT_EQ(err["error"]["code"], "unsupported_in_condition");

  const auto id = create("suggest_preview");
  post("/sessions/" + id + "/suggestions/request", json::object(), 202);
  snap = wait_for(id, [](const json& s) { return !s["suggestions"].empty(); });
  const std::string sid2 = snap["suggestions"][0]["suggestion_id"];
  auto p = post("/sessions/" + id + "/suggestions/" + sid2 + "/preview", json::object(), 202);
  const std::string pid = p["preview_id"];
  wait_for(id, [&](const json& s) { return s["open_previews"].size() == 1; });
  // The preview result lands asynchronously; accepting can race it, so wait
  // until the stream of telemetry shows the result.
  for (int i = 0; i < 200; ++i) {
    bool ready = false;
    for (const auto& l : sink->lines()) ready |= l.find("\"kind\":\"suggestion_preview\"") != std::string::npos;
    if (ready) break;
    std::this_thread::sleep_for(std::chrono::milliseconds(10));
  }
  post("/sessions/" + id + "/previews/" + pid + "/accept", {{"selected_hunks", {0}}}, 204);
  snap = get("/sessions/" + id);
  EXPECT_EQ(snap["documents"][0]["text"], "x = 2\ny = 3\n");
  post("/sessions/" + id + "/previews/" + pid + "/hide", json::object(), 409);
}

TEST_F(GatewayTest, BaselineChatWorks) {
  const auto id = create("baseline");
  auto r = post("/sessions/" + id + "/chat", {{"content", "hello"}}, 202);
  EXPECT_TRUE(r.contains("call_id"));
  auto snap = wait_for(id, [](const json& s) { return s["chat"].size() == 2; });
  EXPECT_EQ(snap["chat"][1]["role"], "assistant");
  post("/sessions/" + id + "/suggestions/request", json::object(), 409);
  post("/sessions/" + id + "/chat/clear", json::object(), 204);
  EXPECT_TRUE(get("/sessions/" + id)["chat"].empty());
}

TEST_F(GatewayTest, RunStartsDebugBatch) {
  const auto id = create("suggest", "print(1/0)\n");
  auto r = post("/sessions/" + id + "/run", json::object(), 202);
  EXPECT_EQ(r["run_id"], 1);
  auto snap = wait_for(id, [](const json& s) { return !s["suggestions"].empty(); });
  EXPECT_TRUE(snap["last_run"]["is_error"].get<bool>());
  EXPECT_EQ(snap["suggestions"][0]["origin"], "proactive_debug");
}

TEST_F(GatewayTest, RunnerDisabledIs503) {
  start(false);
  const auto id = create("suggest");
  auto err = post("/sessions/" + id + "/run", json::object(), 503);
  EXPECT_EQ(err["error"]["code"], "runner_unavailable");
}

TEST_F(GatewayTest, TasksStartAndSubmit) {
  const auto id = create("suggest");
  post("/sessions/" + id + "/tasks/start", {{"task_id", "todo_list"}}, 204);
  auto snap = get("/sessions/" + id);
  EXPECT_EQ(snap["task_id"], "todo_list");
  EXPECT_NE(snap["documents"][0]["text"], "x = 1\ny = 2\n");
  post("/sessions/" + id + "/tasks/submit", json::object(), 204);
}

TEST_F(GatewayTest, TelemetryDownload) {
  const auto id = create("suggest");
  post("/sessions/" + id + "/edits", {{"text", "a\n"}}, 204);
  auto r = client->Get("/sessions/" + id + "/telemetry");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 200);
  auto log = read_log_text(r->body);
  EXPECT_EQ(log.schema_version, 1);
  EXPECT_EQ(log.malformed, 0);
  ASSERT_GE(log.events.size(), 2u);
  EXPECT_EQ(log.events.back().kind, EventKind::code_update);
}

TEST_F(GatewayTest, StreamStartsWithStateNoticeAndDeliversFrames) {
  const auto id = create("baseline");
  std::string received;
  std::atomic<bool> posted{false};
  std::thread poster([&] {
    std::this_thread::sleep_for(std::chrono::milliseconds(200));
    httplib::Client c("127.0.0.1", server->port());
    c.Post("/sessions/" + id + "/chat", json{{"content", "hi"}}.dump(), "application/json");
    posted = true;
  });
  httplib::Client sse("127.0.0.1", server->port());
  sse.set_read_timeout(5, 0);
  sse.Get("/sessions/" + id + "/stream", [&](const char* data, size_t n) {
    received.append(data, n);
    // notice, then the user's chat_message and the assistant's reply
    std::size_t frames = 0;
    for (std::size_t p = received.find("\n\n"); p != std::string::npos; p = received.find("\n\n", p + 2))
      ++frames;
    return frames < 3;
  });
  poster.join();
  EXPECT_TRUE(posted);
  const auto first = received.substr(0, received.find("\n\n"));
  EXPECT_NE(first.find("event: notice"), std::string::npos);
  EXPECT_NE(first.find("\"type\":\"state\""), std::string::npos);
  EXPECT_NE(received.find("event: chat_message"), std::string::npos);

  // A reconnect gets a fresh state notice with the chat included.
  std::string again;
  httplib::Client sse2("127.0.0.1", server->port());
  sse2.Get("/sessions/" + id + "/stream", [&](const char* data, size_t n) {
    again.append(data, n);
    return again.find("\n\n") == std::string::npos;
  });
  EXPECT_NE(again.find("\"type\":\"state\""), std::string::npos);
  EXPECT_NE(again.find("\"hi\""), std::string::npos);
}

TEST_F(GatewayTest, CorsPreflight) {
  auto r = client->Options("/sessions");
  ASSERT_TRUE(r);
  EXPECT_EQ(r->status, 204);
  EXPECT_EQ(r->get_header_value("Access-Control-Allow-Origin"), "*");
}

TEST(ServerConfig, ShippedExamplesLoad) {
  const auto online = load_server_config(CONFIG_DIR "/server.example.json");
  EXPECT_EQ(online.provider_kind, "http");
  EXPECT_TRUE(online.runner_enabled);
  ASSERT_TRUE(online.conditions_file);
  EXPECT_TRUE(std::filesystem::exists(*online.conditions_file));
  ConditionRegistry reg;
  EXPECT_EQ(reg.load_file(*online.conditions_file).size(), 4u);
  EXPECT_EQ(reg.get("persistent_suggest"), conditions::persistent_suggest());
  const auto offline = load_server_config(CONFIG_DIR "/server.offline.json");
  EXPECT_EQ(offline.provider_kind, "echo");
}

TEST(ServerConfig, UnknownKeysRejected) {
  EXPECT_THROW(server_config_from_json(json{{"prot", 1}}), proactive::Error);
  EXPECT_THROW(server_config_from_json(json{{"provider", {{"kind", "magic"}}}}), proactive::Error);
  EXPECT_THROW(server_config_from_json(json{{"port", "eighty"}}), proactive::Error);
}
