#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace corrdyn {

/// Parallel-map capability handed to the rendering and sampling routines.
/// Implementations must call body(i) exactly once for every i in [0, n) and
/// return only after all calls finished. Callers write results into disjoint
/// slots indexed by i, so output never depends on scheduling.
class Executor {
 public:
  virtual ~Executor() = default;
  virtual std::size_t workers() const = 0;
  virtual void parallel_for(std::size_t n,
                            const std::function<void(std::size_t)>& body) const = 0;
};

class SequentialExecutor final : public Executor {
 public:
  std::size_t workers() const override { return 1; }
  void parallel_for(std::size_t n,
                    const std::function<void(std::size_t)>& body) const override;
};

/// Shared sequential executor used as the default argument everywhere.
const Executor& sequential_executor();

/// Fixed-size thread pool. Indices are handed out dynamically; the first
/// exception thrown by a body is rethrown from parallel_for.
class WorkerPool final : public Executor {
 public:
  explicit WorkerPool(std::size_t workers);
  ~WorkerPool() override;
  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  std::size_t workers() const override { return threads_.size() + 1; }
  void parallel_for(std::size_t n,
                    const std::function<void(std::size_t)>& body) const override;

 private:
  struct Job;
  void worker_loop();

  std::vector<std::thread> threads_;
  mutable std::mutex mutex_;
  mutable std::condition_variable wake_;
  mutable std::condition_variable done_;
  mutable Job* job_ = nullptr;
  mutable std::size_t generation_ = 0;
  bool stopping_ = false;
};

}  // namespace corrdyn
