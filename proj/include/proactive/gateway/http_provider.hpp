#pragma once

#include <string>

#include "json.hpp"
#include "proactive/provider.hpp"

namespace proactive::gateway {

struct HttpProviderConfig {
  /// Scheme, host and optional port, e.g. "https://api.openai.com".
  std::string base_url = "https://api.openai.com";
  std::string path = "/v1/chat/completions";
  std::string model = "gpt-4o";
  double temperature = 0.2;
  Millis timeout{60000};
  /// Environment variable holding the bearer key.
  std::string key_env = "PROACTIVE_PROVIDER_KEY";
};

/// Talks to any chat-completions endpoint that follows the OpenAI wire
/// format.
class HttpChatProvider : public Provider {
 public:
  explicit HttpChatProvider(HttpProviderConfig cfg);
  ProviderResponse complete(const PromptBundle& bundle) override;
  std::string name() const override { return "http:" + cfg_.model; }

  /// Request body for a bundle; exposed for tests.
  nlohmann::json request_body(const PromptBundle& bundle) const;

 private:
  HttpProviderConfig cfg_;
  std::string key_;
};

/// Pulls the assistant text out of a chat-completions response body.
/// Throws ProviderError when the body has no usable choice.
std::string completion_text(const std::string& body);

}  // namespace proactive::gateway
