#include "proactive/gateway/http_provider.hpp"

#include <chrono>
#include <cstdlib>

#include "httplib.h"

namespace proactive::gateway {

using nlohmann::json;

HttpChatProvider::HttpChatProvider(HttpProviderConfig cfg) : cfg_(std::move(cfg)) {
  if (const char* k = std::getenv(cfg_.key_env.c_str())) key_ = k;
}

json HttpChatProvider::request_body(const PromptBundle& bundle) const {
  json messages = json::array();
  for (const auto& seg : bundle.messages) {
    std::string role = "user";
    if (seg.role == SegmentRole::system) {
      role = "system";
    } else if (seg.role == SegmentRole::history && seg.speaker != ChatRole::user) {
      role = "assistant";
    }
    messages.push_back({{"role", role}, {"content", seg.content}});
  }
  return {{"model", cfg_.model}, {"temperature", cfg_.temperature}, {"messages", std::move(messages)}};
}

std::string completion_text(const std::string& body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded()) throw ProviderError("provider returned invalid JSON");
  if (j.contains("error")) {
    const auto& e = j["error"];
    throw ProviderError("provider error: " +
                        (e.is_object() ? e.value("message", e.dump()) : e.dump()));
  }
  try {
    const auto& content = j.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw ProviderError("provider returned no text content");
    return content.get<std::string>();
  } catch (const json::exception&) {
    throw ProviderError("provider response has no choices[0].message.content");
  }
}

ProviderResponse HttpChatProvider::complete(const PromptBundle& bundle) {
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - start);
  };
  const std::string body = request_body(bundle).dump();

  httplib::Client client(cfg_.base_url);
  const auto secs = cfg_.timeout.count() / 1000;
  const auto usecs = (cfg_.timeout.count() % 1000) * 1000;
  client.set_connection_timeout(secs, usecs);
  client.set_read_timeout(secs, usecs);
  client.set_write_timeout(secs, usecs);
  httplib::Headers headers;
  if (!key_.empty()) headers.emplace("Authorization", "Bearer " + key_);

  auto res = client.Post(cfg_.path, headers, body, "application/json");
  if (!res)
    throw ProviderError("provider request failed: " + httplib::to_string(res.error()), elapsed());
  if (res->status < 200 || res->status >= 300) {
    std::string detail = res->body.substr(0, 300);
    throw ProviderError("provider returned HTTP " + std::to_string(res->status) + ": " + detail,
                        elapsed());
  }
  ProviderResponse out;
  try {
    out.raw_text = completion_text(res->body);
  } catch (const ProviderError& e) {
    throw ProviderError(e.what(), elapsed());
  }
  out.latency = elapsed();
  out.provider_name = name();
  out.request_body = body;
  out.response_body = res->body;
  return out;
}

}  // namespace proactive::gateway
