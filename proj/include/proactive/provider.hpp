#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "proactive/prompt.hpp"
#include "proactive/types.hpp"

namespace proactive {

struct ProviderResponse {
  std::string raw_text;
  Millis latency{0};
  std::string provider_name;
  /// Wire bodies, filled by network providers for --log-provider-io.
  std::string request_body;
  std::string response_body;
};

/// Raised by providers on timeout, transport or protocol failure.
class ProviderError : public std::runtime_error {
 public:
  explicit ProviderError(const std::string& what, Millis latency = Millis{0})
      : std::runtime_error(what), latency_(latency) {}

  /// Time spent before the failure, when known.
  Millis latency() const { return latency_; }

 private:
  Millis latency_;
};

/// A model backend. Implementations must be safe to call from several
/// threads at once.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResponse complete(const PromptBundle& bundle) = 0;
  virtual std::string name() const = 0;
};

/// One scripted reply. `fail` makes the call raise ProviderError.
struct ScriptedReply {
  std::string raw_text;
  Millis latency{1000};
  bool fail = false;
};

/// Replays fixtures deterministically, either in call order or keyed by the
/// request hash (request_key()).
class ScriptedProvider : public Provider {
 public:
  enum class Mode { sequence, keyed };

  explicit ScriptedProvider(std::vector<ScriptedReply> replies);
  ScriptedProvider(std::map<std::string, ScriptedReply> by_key);

  /// Loads a fixture directory. Files are read in lexicographic order;
  /// `*.json` files hold {"raw_text", "latency_ms", "fail"}, anything else
  /// is the raw reply verbatim. In keyed mode the file stem is the key.
  static std::unique_ptr<ScriptedProvider> from_directory(const std::filesystem::path& dir,
                                                          Mode mode = Mode::sequence,
                                                          Millis default_latency = Millis{1000});

  ProviderResponse complete(const PromptBundle& bundle) override;
  std::string name() const override { return "scripted"; }

  std::size_t calls() const;
  std::size_t remaining() const;

 private:
  Mode mode_;
  std::vector<ScriptedReply> sequence_;
  std::map<std::string, ScriptedReply> keyed_;
  std::size_t next_ = 0;
  mutable std::mutex mu_;
};

/// First 16 hex digits of the SHA-256 of the bundle's canonical form.
std::string request_key(const PromptBundle& bundle);

/// Offline smoke-test backend. Suggestion prompts get one well-formed
/// explain_code entry; chat prompts echo the last user message; preview
/// prompts return the current code unchanged.
class EchoProvider : public Provider {
 public:
  ProviderResponse complete(const PromptBundle& bundle) override;
  std::string name() const override { return "echo"; }
};

}  // namespace proactive
