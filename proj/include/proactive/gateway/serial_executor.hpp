#pragma once

#include <condition_variable>
#include <deque>
#include <functional>
#include <future>
#include <memory>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace proactive::gateway {

/// Fixed set of worker threads draining one FIFO queue.
class WorkerPool {
 public:
  explicit WorkerPool(std::size_t threads);
  ~WorkerPool();
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  void post(std::function<void()> task);
  /// Finishes queued work and joins the threads.
  void shutdown();

 private:
  void loop();

  std::mutex mu_;
  std::condition_variable cv_;
  std::deque<std::function<void()>> tasks_;
  std::vector<std::thread> threads_;
  bool stopping_ = false;
};

/// Runs posted tasks one at a time, in post order, on a shared pool.
class SerialExecutor {
 public:
  explicit SerialExecutor(WorkerPool& pool);

  void post(std::function<void()> task);

  /// Posts `fn` and returns a future for its result or exception.
  template <class F>
  auto submit(F fn) -> std::future<std::invoke_result_t<F>> {
    using R = std::invoke_result_t<F>;
    auto task = std::make_shared<std::packaged_task<R()>>(std::move(fn));
    auto fut = task->get_future();
    post([task] { (*task)(); });
    return fut;
  }

 private:
  struct State {
    std::mutex mu;
    std::deque<std::function<void()>> queue;
    bool running = false;
  };
  static void drain(const std::shared_ptr<State>& st);

  WorkerPool& pool_;
  std::shared_ptr<State> state_;
};

}  // namespace proactive::gateway
