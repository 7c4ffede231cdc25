#include "proactive/provider.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "proactive/error.hpp"
#include "proactive/text.hpp"

namespace proactive {

ScriptedProvider::ScriptedProvider(std::vector<ScriptedReply> replies)
    : mode_(Mode::sequence), sequence_(std::move(replies)) {}

ScriptedProvider::ScriptedProvider(std::map<std::string, ScriptedReply> by_key)
    : mode_(Mode::keyed), keyed_(std::move(by_key)) {}

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::configuration, "cannot read fixture " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ScriptedReply load_reply(const std::filesystem::path& p, Millis default_latency) {
  ScriptedReply r;
  r.latency = default_latency;
  auto body = slurp(p);
  if (p.extension() == ".json") {
    auto j = nlohmann::json::parse(body, nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("raw_text"))
      throw Error(ErrorCode::configuration,
                  "fixture " + p.string() + " must be an object with raw_text");
    r.raw_text = j.at("raw_text").get<std::string>();
    r.latency = Millis{j.value("latency_ms", default_latency.count())};
    r.fail = j.value("fail", false);
  } else {
    r.raw_text = std::move(body);
  }
  return r;
}

}  // namespace

std::unique_ptr<ScriptedProvider> ScriptedProvider::from_directory(
    const std::filesystem::path& dir, Mode mode, Millis default_latency) {
  if (!std::filesystem::is_directory(dir))
    throw Error(ErrorCode::configuration, "fixture directory not found: " + dir.string());
  std::vector<std::filesystem::path> files;
  for (const auto& e : std::filesystem::directory_iterator(dir))
    if (e.is_regular_file()) files.push_back(e.path());
  std::sort(files.begin(), files.end());

  if (mode == Mode::keyed) {
    std::map<std::string, ScriptedReply> keyed;
    for (const auto& f : files) keyed[f.stem().string()] = load_reply(f, default_latency);
    return std::make_unique<ScriptedProvider>(std::move(keyed));
  }
  std::vector<ScriptedReply> seq;
  for (const auto& f : files) seq.push_back(load_reply(f, default_latency));
  return std::make_unique<ScriptedProvider>(std::move(seq));
}

ProviderResponse ScriptedProvider::complete(const PromptBundle& bundle) {
  ScriptedReply reply;
  {
    std::lock_guard lock(mu_);
    if (mode_ == Mode::sequence) {
      if (next_ >= sequence_.size())
        throw ProviderError("scripted provider exhausted after " + std::to_string(next_) +
                            " replies");
      reply = sequence_[next_++];
    } else {
      ++next_;
      auto key = request_key(bundle);
      auto it = keyed_.find(key);
      if (it == keyed_.end()) throw ProviderError("no scripted reply for request key " + key);
      reply = it->second;
    }
  }
  if (reply.fail)
    throw ProviderError(reply.raw_text.empty() ? "scripted failure" : reply.raw_text, reply.latency);
  return ProviderResponse{reply.raw_text, reply.latency, name(), {}, {}};
}

std::size_t ScriptedProvider::calls() const {
  std::lock_guard lock(mu_);
  return next_;
}

std::size_t ScriptedProvider::remaining() const {
  std::lock_guard lock(mu_);
  return mode_ == Mode::sequence ? sequence_.size() - std::min(next_, sequence_.size())
                                 : keyed_.size();
}

std::string request_key(const PromptBundle& bundle) {
  return text::sha256_hex(bundle.canonical()).substr(0, 16);
}

ProviderResponse EchoProvider::complete(const PromptBundle& bundle) {
  ProviderResponse r;
  r.provider_name = name();
  switch (bundle.kind) {
    case PromptKind::standard:
    case PromptKind::debug: {
      nlohmann::json arr = nlohmann::json::array();
      arr.push_back({{"type", bundle.kind == PromptKind::debug ? "debug_runtime" : "explain_code"},
                     {"summary", "Echo provider placeholder suggestion."},
                     {"explanation", {"Configure a remote provider for real suggestions."}}});
      r.raw_text = "```json\n" + arr.dump(2) + "\n```";
      break;
    }
    case PromptKind::chat: {
      std::string last;
      for (const auto& m : bundle.messages)
        if (m.role == SegmentRole::history && m.speaker != ChatRole::assistant) last = m.content;
      r.raw_text = "echo: " + last;
      break;
    }
    case PromptKind::preview: {
      // Hand the current code back untouched.
      const auto& instr = bundle.messages.back().content;
      auto blocks = text::fenced_blocks(instr);
      r.raw_text = "```\n" + (blocks.empty() ? std::string() : blocks.front().body) + "\n```";
      break;
    }
  }
  return r;
}

}  // namespace proactive
