#include "proactive/gateway/server.hpp"

#include <iostream>
#include <random>

#include "httplib.h"
#include "proactive/error.hpp"
#include "proactive/json_codec.hpp"

namespace proactive::gateway {

using nlohmann::json;

ServerDeps build_dependencies(const ServerConfig& cfg) {
  ServerDeps d;
  if (cfg.provider_kind == "http") {
    d.provider = std::make_shared<HttpChatProvider>(cfg.http);
  } else if (cfg.provider_kind == "scripted") {
    d.provider = std::shared_ptr<Provider>(ScriptedProvider::from_directory(cfg.scripted_dir));
  } else {
    d.provider = std::make_shared<EchoProvider>();
  }
  if (cfg.runner_enabled) d.runner = std::make_shared<CommandRunner>(cfg.runner);
  if (cfg.conditions_file) d.conditions.load_file(*cfg.conditions_file);
  d.sinks = cfg.telemetry_file ? shared_file(*cfg.telemetry_file) : per_session_files(cfg.telemetry_dir);
  return d;
}

namespace {

json error_body(std::string_view code, const std::string& message) {
  return json{{"error", {{"code", code}, {"message", message}}}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

json body_of(const httplib::Request& req) {
  if (req.body.empty()) return json::object();
  json j = json::parse(req.body, nullptr, false);
  if (j.is_discarded()) throw Error(ErrorCode::validation, "request body is not valid JSON");
  if (!j.is_object()) throw Error(ErrorCode::validation, "request body must be a JSON object");
  return j;
}

std::string required_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string())
    throw Error(ErrorCode::validation, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(ErrorCode::validation, std::string("'") + key + "' must be a string");
  return it->get<std::string>();
}

/// Runs a handler, mapping errors to the API error body.
template <class F>
void guarded(httplib::Response& res, F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    send_json(res, http_status(e.code()), error_body(api_code(e.code()), e.what()));
  } catch (const json::exception& e) {
    send_json(res, 400, error_body("validation", e.what()));
  } catch (const std::exception& e) {
    send_json(res, 500, error_body("internal", e.what()));
  }
}

std::string new_session_id() {
  static std::mutex mu;
  static std::mt19937_64 rng{std::random_device{}()};
  std::lock_guard lock(mu);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(rng()));
  return buf;
}

std::string sse_frame(const PushFrame& f) {
  json data{{"seq", f.seq}, {"frame_kind", f.frame_kind}, {"payload", f.payload}};
  return "id: " + std::to_string(f.seq) + "\nevent: " + f.frame_kind +
         "\ndata: " + data.dump(-1, ' ', false, json::error_handler_t::replace) + "\n\n";
}

}  // namespace

Server::Server(ServerConfig cfg, ServerDeps deps)
    : cfg_(std::move(cfg)),
      deps_(std::move(deps)),
      http_(std::make_unique<httplib::Server>()),
      session_pool_(cfg_.session_threads),
      io_pool_(cfg_.provider_threads) {
  if (!deps_.provider) throw Error(ErrorCode::configuration, "no provider configured");
  if (!deps_.sinks) throw Error(ErrorCode::configuration, "no telemetry sink configured");
  const auto http_threads = std::max<std::size_t>(cfg_.http_threads, 2);
  http_->new_task_queue = [http_threads] { return new httplib::ThreadPool(http_threads); };
  routes();
}

Server::~Server() { stop(); }

std::shared_ptr<SessionHost> Server::find(const SessionId& id) const {
  std::lock_guard lock(sessions_mu_);
  auto it = sessions_.find(id);
  return it == sessions_.end() ? nullptr : it->second;
}

std::size_t Server::session_count() const {
  std::lock_guard lock(sessions_mu_);
  return sessions_.size();
}

std::shared_ptr<SessionHost> Server::host_or_throw(const std::string& id) const {
  auto h = find(id);
  if (!h) throw Error(ErrorCode::not_found, "no session '" + id + "'");
  return h;
}

void Server::routes() {
  auto& s = *http_;
  s.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                         {"Access-Control-Allow-Headers", "Content-Type"},
                         {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"}});
  s.Options(R"(.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

  s.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, 200, json{{"status", "ok"}});
  });

  s.Get("/conditions", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& n : deps_.conditions.names()) out.push_back(to_json(deps_.conditions.get(n)));
    send_json(res, 200, out);
  });

  s.Get("/tasks", [this](const httplib::Request&, httplib::Response& res) {
    json out = json::array();
    for (const auto& t : deps_.tasks.tasks())
      out.push_back({{"task_id", t.id},
                     {"title", t.title},
                     {"type", std::string(to_string(t.type))},
                     {"description", t.description},
                     {"starter_code", t.starter_code}});
    send_json(res, 200, out);
  });

  s.Post("/sessions", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      const json body = body_of(req);
      const auto& cfg = deps_.conditions.get(required_string(body, "condition"));
      SessionOptions opts = options_for(cfg, nullptr);
      if (auto task = optional_string(body, "task")) {
        const auto& fixture = deps_.tasks.get(*task);
        opts = options_for(cfg, &fixture);
      }
      if (auto code = optional_string(body, "initial_code")) opts.initial_code = *code;
      opts.participant_id = optional_string(body, "participant_id");
      opts.log_provider_io = cfg_.log_provider_io;
      const auto id = new_session_id();
      auto host = std::make_shared<SessionHost>(id, std::move(opts), deps_.sinks(id), deps_.provider,
                                                deps_.runner, session_pool_, io_pool_, deps_.clock);
      {
        std::lock_guard lock(sessions_mu_);
        sessions_[id] = host;
      }
      send_json(res, 201, host->query([](const Session& s) { return s.snapshot(); }).get());
    });
  });

  s.Get(R"(/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto host = host_or_throw(req.matches[1]);
      send_json(res, 200, host->query([](const Session& s) { return s.snapshot(); }).get());
    });
  });

  // Input routes: parse, run on the session, answer with 204 or 202.
  auto input_route = [this](const std::string& pattern, int status,
                            std::function<SessionHost::Input(const httplib::Request&, const json&)> make,
                            std::function<json(const Effects&)> reply = nullptr) {
    http_->Post(pattern, [this, status, make, reply](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] {
        auto host = host_or_throw(req.matches[1]);
        const json body = body_of(req);
        auto effects = host->input(make(req, body)).get();
        if (reply) {
          send_json(res, status, reply(effects));
        } else {
          res.status = status;
        }
      });
    });
  };

  input_route(R"(/sessions/([^/]+)/edits)", 204, [](const httplib::Request&, const json& b) {
    auto text = required_string(b, "text");
    auto doc = optional_string(b, "doc_id");
    return [doc, text](Session& s, Timestamp ts) {
      return s.apply_edit(doc.value_or(s.primary_document().id), text, ts);
    };
  });

  input_route(R"(/sessions/([^/]+)/activity)", 204, [](const httplib::Request&, const json& b) {
    auto kind = required_string(b, "kind");
    if (kind != "chat_typing") throw Error(ErrorCode::validation, "unknown activity '" + kind + "'");
    return [](Session& s, Timestamp ts) { return s.chat_typing(ts); };
  });

  input_route(
      R"(/sessions/([^/]+)/chat)", 202,
      [](const httplib::Request&, const json& b) {
        auto content = required_string(b, "content");
        return [content](Session& s, Timestamp ts) { return s.post_chat(content, ts); };
      },
      [](const Effects& e) {
        json out = json::object();
        for (const auto& x : e)
          if (auto* c = std::get_if<RequestChatReply>(&x)) out["call_id"] = c->call_id;
        return out;
      });

  input_route(R"(/sessions/([^/]+)/chat/clear)", 204, [](const httplib::Request&, const json&) {
    return [](Session& s, Timestamp ts) { return s.clear_chat(ts); };
  });

  input_route(R"(/sessions/([^/]+)/suggestions/request)", 202, [](const httplib::Request&, const json&) {
    return [](Session& s, Timestamp ts) { return s.request_suggestions(ts); };
  });

  input_route(R"(/sessions/([^/]+)/suggestions/clear)", 204, [](const httplib::Request&, const json&) {
    return [](Session& s, Timestamp ts) { return s.clear_all(ts); };
  });

  input_route(R"(/sessions/([^/]+)/suggestions/([^/]+)/(expand|collapse|accept|delete|copy))", 204,
              [](const httplib::Request& req, const json&) -> SessionHost::Input {
                const std::string sid = req.matches[2];
                const std::string action = req.matches[3];
                return [sid, action](Session& s, Timestamp ts) {
                  if (action == "expand") return s.expand(sid, ts);
                  if (action == "collapse") return s.collapse(sid, ts);
                  if (action == "accept") return s.accept(sid, ts);
                  if (action == "delete") return s.remove(sid, ts);
                  return s.copy(sid, ts);
                };
              });

  input_route(
      R"(/sessions/([^/]+)/suggestions/([^/]+)/preview)", 202,
      [](const httplib::Request& req, const json&) -> SessionHost::Input {
        const std::string sid = req.matches[2];
        return [sid](Session& s, Timestamp ts) { return s.request_preview(sid, ts); };
      },
      [](const Effects& e) {
        json out = json::object();
        for (const auto& x : e)
          if (auto* p = std::get_if<RequestPreview>(&x)) out["preview_id"] = p->preview_id;
        return out;
      });

  input_route(R"(/sessions/([^/]+)/previews/([^/]+)/accept)", 204,
              [](const httplib::Request& req, const json& b) -> SessionHost::Input {
                const std::string pid = req.matches[2];
                std::optional<std::vector<int>> selected;
                if (auto it = b.find("selected_hunks"); it != b.end() && !it->is_null()) {
                  if (!it->is_array()) throw Error(ErrorCode::validation, "'selected_hunks' must be an array");
                  selected = it->get<std::vector<int>>();
                }
                auto final_text = optional_string(b, "final_text");
                return [pid, selected, final_text](Session& s, Timestamp ts) {
                  return s.accept_preview(pid, selected, final_text, ts);
                };
              });

  input_route(R"(/sessions/([^/]+)/previews/([^/]+)/hide)", 204,
              [](const httplib::Request& req, const json&) -> SessionHost::Input {
                const std::string pid = req.matches[2];
                return [pid](Session& s, Timestamp ts) { return s.hide_preview(pid, ts); };
              });

  input_route(
      R"(/sessions/([^/]+)/run)", 202,
      [](const httplib::Request&, const json& b) {
        auto doc = optional_string(b, "doc_id");
        return [doc](Session& s, Timestamp ts) {
          return s.run_code(doc.value_or(s.primary_document().id), ts);
        };
      },
      [](const Effects& e) {
        json out = json::object();
        for (const auto& x : e)
          if (auto* r = std::get_if<RunProgram>(&x)) out["run_id"] = r->run_id;
        return out;
      });

  input_route(R"(/sessions/([^/]+)/tasks/start)", 204,
              [this](const httplib::Request&, const json& b) -> SessionHost::Input {
                auto task_id = required_string(b, "task_id");
                std::optional<std::string> starter = optional_string(b, "starter_code");
                if (!starter && b.value("use_starter", true))
                  if (const auto* t = deps_.tasks.find(task_id)) starter = t->starter_code;
                return [task_id, starter](Session& s, Timestamp ts) {
                  return s.start_task(task_id, starter, ts);
                };
              });

  input_route(R"(/sessions/([^/]+)/tasks/submit)", 204, [](const httplib::Request&, const json&) {
    return [](Session& s, Timestamp ts) { return s.submit_task(ts); };
  });

  s.Get(R"(/sessions/([^/]+)/telemetry)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto host = host_or_throw(req.matches[1]);
      auto lines = host->query([](const Session& s) { return json(s.telemetry_lines()); }).get();
      std::string out = schema_header_line() + "\n";
      for (const auto& l : lines) out += l.get<std::string>() + "\n";
      res.status = 200;
      res.set_content(out, "application/x-ndjson");
    });
  });

  s.Get(R"(/sessions/([^/]+)/stream)", [this](const httplib::Request& req, httplib::Response& res) {
    guarded(res, [&] {
      auto host = host_or_throw(req.matches[1]);
      auto channel = host->subscribe();
      res.set_header("Cache-Control", "no-cache");
      res.set_header("X-Accel-Buffering", "no");
      auto idle = std::make_shared<int>(0);
      res.set_chunked_content_provider(
          "text/event-stream",
          [this, channel, idle](size_t, httplib::DataSink& sink) {
            if (stopping_) return false;
            auto frame = channel->wait(Millis{500});
            if (frame) {
              *idle = 0;
              const auto text = sse_frame(*frame);
              return sink.write(text.data(), text.size());
            }
            if (channel->closed()) return false;
            if (++*idle >= 30) {
              *idle = 0;
              static const std::string keepalive = ": keepalive\n\n";
              return sink.write(keepalive.data(), keepalive.size());
            }
            return sink.is_writable();
          },
          [host, channel](bool) { host->unsubscribe(channel); });
    });
  });
}

int Server::bind() {
  if (cfg_.port == 0) {
    port_ = http_->bind_to_any_port(cfg_.host);
  } else {
    port_ = http_->bind_to_port(cfg_.host, cfg_.port) ? cfg_.port : -1;
  }
  if (port_ <= 0)
    throw Error(ErrorCode::configuration,
                "cannot bind " + cfg_.host + ":" + std::to_string(cfg_.port));
  return port_;
}

void Server::ticker() {
  std::unique_lock lock(tick_mu_);
  while (!stopping_) {
    tick_cv_.wait_for(lock, cfg_.tick, [this] { return stopping_.load(); });
    if (stopping_) break;
    std::vector<std::shared_ptr<SessionHost>> hosts;
    {
      std::lock_guard slock(sessions_mu_);
      for (auto& [id, h] : sessions_) hosts.push_back(h);
    }
    for (auto& h : hosts) h->tick();
  }
}

void Server::serve() {
  if (!tick_thread_.joinable()) tick_thread_ = std::thread([this] { ticker(); });
  http_->listen_after_bind();
}

int Server::start() {
  const int port = bind();
  if (!tick_thread_.joinable()) tick_thread_ = std::thread([this] { ticker(); });
  serve_thread_ = std::thread([this] { http_->listen_after_bind(); });
  http_->wait_until_ready();
  return port;
}

void Server::stop() {
  if (stopping_.exchange(true)) return;
  {
    std::lock_guard lock(tick_mu_);
  }
  tick_cv_.notify_all();
  {
    std::lock_guard lock(sessions_mu_);
    for (auto& [id, h] : sessions_) h->close_channels();
  }
  http_->stop();
  if (serve_thread_.joinable()) serve_thread_.join();
  if (tick_thread_.joinable()) tick_thread_.join();
  io_pool_.shutdown();
  session_pool_.shutdown();
}

}  // namespace proactive::gateway
