// SPDX-License-Identifier: Apache-2.0
//
// falawn — fluid-antenna base-station simulator and transmit-power optimizer
// Copyright (C) 2026 the falawn authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace falawn {

/// Fixed-size worker pool for index-parallel loops. Tasks write results into
/// caller-owned slots keyed by index, so the outcome never depends on how
/// work is interleaved across threads. Nested calls from inside a worker run
/// inline (serially) instead of deadlocking.
class ThreadPool {
  public:
    /// workers <= 1 runs everything inline.
    explicit ThreadPool(int workers);
    ~ThreadPool();

    ThreadPool(const ThreadPool &) = delete;
    ThreadPool &operator=(const ThreadPool &) = delete;

    int worker_count() const { return static_cast<int>(threads_.size()) + 1; }

    /// Runs fn(0) .. fn(count-1), blocking until all complete. The caller
    /// participates in the work.
    void parallel_indexed(int count, std::function<void(int)> fn);

    /// Resolves the worker count: explicit request wins, then the
    /// FA_LAWN_THREADS environment variable, then hardware concurrency.
    static int resolve_worker_count(int requested = 0);

  private:
    struct Job {
        std::function<void(int)> fn;
        int count = 0;
        std::atomic<int> cursor{0};
        std::atomic<int> done{0};
        std::uint64_t id = 0;
    };

    void worker_loop();
    static void run_share(const std::shared_ptr<Job> &job);

    std::vector<std::thread> threads_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable finished_;
    std::shared_ptr<Job> job_;
    std::uint64_t job_serial_ = 0;
    bool stopping_ = false;
};

} // namespace falawn
