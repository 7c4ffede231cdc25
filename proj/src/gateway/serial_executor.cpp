#include "proactive/gateway/serial_executor.hpp"

namespace proactive::gateway {

WorkerPool::WorkerPool(std::size_t threads) {
  if (threads == 0) threads = 1;
  for (std::size_t i = 0; i < threads; ++i) threads_.emplace_back([this] { loop(); });
}

WorkerPool::~WorkerPool() { shutdown(); }

void WorkerPool::post(std::function<void()> task) {
  {
    std::lock_guard lock(mu_);
    if (stopping_) return;
    tasks_.push_back(std::move(task));
  }
  cv_.notify_one();
}

void WorkerPool::shutdown() {
  {
    std::lock_guard lock(mu_);
    if (stopping_ && threads_.empty()) return;
    stopping_ = true;
  }
  cv_.notify_all();
  for (auto& t : threads_)
    if (t.joinable()) t.join();
  threads_.clear();
}

void WorkerPool::loop() {
  for (;;) {
    std::function<void()> task;
    {
      std::unique_lock lock(mu_);
      cv_.wait(lock, [this] { return stopping_ || !tasks_.empty(); });
      if (tasks_.empty()) return;
      task = std::move(tasks_.front());
      tasks_.pop_front();
    }
    try {
      task();
    } catch (...) {
      // Tasks report their own failures; a stray throw must not kill the worker.
    }
  }
}

SerialExecutor::SerialExecutor(WorkerPool& pool) : pool_(pool), state_(std::make_shared<State>()) {}

void SerialExecutor::post(std::function<void()> task) {
  bool start = false;
  {
    std::lock_guard lock(state_->mu);
    state_->queue.push_back(std::move(task));
    if (!state_->running) {
      state_->running = true;
      start = true;
    }
  }
  if (start) pool_.post([st = state_] { drain(st); });
}

void SerialExecutor::drain(const std::shared_ptr<State>& st) {
  for (;;) {
    std::function<void()> task;
    {
      std::lock_guard lock(st->mu);
      if (st->queue.empty()) {
        st->running = false;
        return;
      }
      task = std::move(st->queue.front());
      st->queue.pop_front();
    }
    try {
      task();
    } catch (...) {
    }
  }
}

}  // namespace proactive::gateway
