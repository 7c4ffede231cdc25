#include "proactive/gateway/session_host.hpp"

#include <algorithm>
#include <chrono>
#include <iostream>

namespace proactive::gateway {

Timestamp wall_clock() {
  const auto now = std::chrono::system_clock::now().time_since_epoch();
  return Timestamp{std::chrono::duration_cast<Millis>(now).count()};
}

void FrameChannel::deliver(const PushFrame& f) {
  {
    std::lock_guard lock(mu_);
    if (closed_) return;
    if (frames_.size() >= capacity_) {
      closed_ = true;
      frames_.clear();
    } else {
      frames_.push_back(f);
    }
  }
  cv_.notify_all();
}

std::optional<PushFrame> FrameChannel::wait(Millis timeout) {
  std::unique_lock lock(mu_);
  cv_.wait_for(lock, timeout, [this] { return closed_ || !frames_.empty(); });
  if (frames_.empty()) return std::nullopt;
  PushFrame f = std::move(frames_.front());
  frames_.pop_front();
  return f;
}

void FrameChannel::close() {
  {
    std::lock_guard lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool FrameChannel::closed() const {
  std::lock_guard lock(mu_);
  return closed_;
}

SessionHost::SessionHost(SessionId id, SessionOptions opts, std::shared_ptr<TelemetrySink> sink,
                         std::shared_ptr<Provider> provider, std::shared_ptr<Runner> runner,
                         WorkerPool& session_pool, WorkerPool& io_pool, Clock clock)
    : id_(std::move(id)),
      provider_(std::move(provider)),
      runner_(std::move(runner)),
      strand_(session_pool),
      io_pool_(io_pool),
      clock_(std::move(clock)) {
  last_ = clock_();
  opts.runner_available = runner_ != nullptr;
  session_ = std::make_unique<Session>(id_, std::move(opts), std::move(sink), last_);
  session_->set_frame_listener([this](const PushFrame& f) {
    std::lock_guard lock(channels_mu_);
    for (auto& ch : channels_) ch->deliver(f);
  });
}

Timestamp SessionHost::now() {
  last_ = std::max(last_, clock_());
  return last_;
}

std::future<Effects> SessionHost::input(Input fn) {
  auto self = shared_from_this();
  return strand_.submit([self, fn = std::move(fn)] {
    Effects effects = fn(*self->session_, self->now());
    self->dispatch(effects);
    return effects;
  });
}

std::future<nlohmann::json> SessionHost::query(std::function<nlohmann::json(const Session&)> fn) {
  auto self = shared_from_this();
  return strand_.submit([self, fn = std::move(fn)] { return fn(*self->session_); });
}

void SessionHost::tick() {
  auto self = shared_from_this();
  strand_.post([self] {
    try {
      self->dispatch(self->session_->tick(self->now()));
    } catch (const std::exception& e) {
      std::lock_guard lock(self->errors_mu_);
      self->errors_.push_back(std::string("tick: ") + e.what());
    }
  });
}

void SessionHost::complete(std::function<Effects(Session&, Timestamp)> fn) {
  auto self = shared_from_this();
  strand_.post([self, fn = std::move(fn)] {
    try {
      self->dispatch(fn(*self->session_, self->now()));
    } catch (const std::exception& e) {
      std::lock_guard lock(self->errors_mu_);
      self->errors_.push_back(e.what());
      std::cerr << "session " << self->id_ << ": " << e.what() << '\n';
    }
  });
}

ProviderOutcome SessionHost::call_provider(const PromptBundle& bundle) {
  const auto start = std::chrono::steady_clock::now();
  try {
    return ProviderOutcome::ok(provider_->complete(bundle));
  } catch (const ProviderError& e) {
    auto latency = e.latency().count() > 0
                       ? e.latency()
                       : std::chrono::duration_cast<Millis>(std::chrono::steady_clock::now() - start);
    return ProviderOutcome::failed(e.what(), latency);
  } catch (const std::exception& e) {
    return ProviderOutcome::failed(e.what(), std::chrono::duration_cast<Millis>(
                                                 std::chrono::steady_clock::now() - start));
  }
}

void SessionHost::dispatch(const Effects& effects) {
  auto self = shared_from_this();
  for (const auto& effect : effects) {
    if (auto* g = std::get_if<GenerateSuggestions>(&effect)) {
      io_pool_.post([self, g = *g] {
        auto outcome = self->call_provider(g.bundle);
        self->complete([g, outcome = std::move(outcome)](Session& s, Timestamp ts) mutable {
          return s.on_suggestions(g.token, g.call_id, std::move(outcome), ts);
        });
      });
    } else if (auto* c = std::get_if<RequestChatReply>(&effect)) {
      io_pool_.post([self, c = *c] {
        auto outcome = self->call_provider(c.bundle);
        self->complete([id = c.call_id, outcome = std::move(outcome)](Session& s, Timestamp ts) mutable {
          return s.on_chat_reply(id, std::move(outcome), ts);
        });
      });
    } else if (auto* p = std::get_if<RequestPreview>(&effect)) {
      io_pool_.post([self, p = *p] {
        auto outcome = self->call_provider(p.bundle);
        self->complete([id = p.call_id, outcome = std::move(outcome)](Session& s, Timestamp ts) mutable {
          return s.on_preview(id, std::move(outcome), ts);
        });
      });
    } else if (auto* r = std::get_if<RunProgram>(&effect)) {
      io_pool_.post([self, r = *r] {
        RunResult result;
        try {
          result = self->runner_->run(r.code);
        } catch (const std::exception& e) {
          result.stderr_text = std::string("runner failed: ") + e.what();
          result.exit_status = -1;
          result.is_error = true;
        }
        self->complete([id = r.run_id, result = std::move(result)](Session& s, Timestamp ts) mutable {
          return s.on_run_result(id, std::move(result), ts);
        });
      });
    }
  }
}

std::shared_ptr<FrameChannel> SessionHost::subscribe() {
  auto ch = std::make_shared<FrameChannel>();
  {
    std::lock_guard lock(channels_mu_);
    channels_.push_back(ch);
  }
  // The state notice goes through the session so it keeps the frame order.
  auto self = shared_from_this();
  strand_.post([self] { self->session_->announce_state(); });
  return ch;
}

void SessionHost::unsubscribe(const std::shared_ptr<FrameChannel>& ch) {
  ch->close();
  std::lock_guard lock(channels_mu_);
  std::erase(channels_, ch);
}

void SessionHost::close_channels() {
  std::lock_guard lock(channels_mu_);
  for (auto& ch : channels_) ch->close();
  channels_.clear();
}

std::vector<std::string> SessionHost::background_errors() const {
  std::lock_guard lock(errors_mu_);
  return errors_;
}

}  // namespace proactive::gateway
