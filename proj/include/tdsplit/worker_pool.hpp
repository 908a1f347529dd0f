/*
 Copyright 2026 The tdsplit Authors

 Licensed under the Apache License, Version 2.0 (the "License");
 you may not use this file except in compliance with the License.
 You may obtain a copy of the License at

      https://www.apache.org/licenses/LICENSE-2.0

 Unless required by applicable law or agreed to in writing, software
 distributed under the License is distributed on an "AS IS" BASIS,
 WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 See the License for the specific language governing permissions and
 limitations under the License.
*/
#ifndef TDSPLIT_WORKER_POOL_HPP
#define TDSPLIT_WORKER_POOL_HPP

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace tdsplit {

/// Fixed set of worker threads executing index-parallel loops. Tasks are
/// distributed statically (task i runs on worker i % threads), so results
/// written to disjoint slots do not depend on scheduling.
class WorkerPool {
 public:
  /// threads == 0 selects std::thread::hardware_concurrency().
  explicit WorkerPool(unsigned threads = 1);
  ~WorkerPool();

  WorkerPool(const WorkerPool&) = delete;
  WorkerPool& operator=(const WorkerPool&) = delete;

  unsigned threads() const { return threads_; }

  /// Runs body(0) .. body(count - 1) and returns when all have finished.
  /// The first exception thrown by a task is rethrown here.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

 private:
  void worker_loop(unsigned id);

  unsigned threads_;
  std::vector<std::jthread> workers_;
  std::mutex mutex_;
  std::condition_variable start_cv_;
  std::condition_variable done_cv_;
  const std::function<void(std::size_t)>* body_ = nullptr;
  std::size_t count_ = 0;
  std::size_t generation_ = 0;
  unsigned pending_ = 0;
  bool stop_ = false;
  std::exception_ptr error_;
};

}  // namespace tdsplit

#endif  // TDSPLIT_WORKER_POOL_HPP
