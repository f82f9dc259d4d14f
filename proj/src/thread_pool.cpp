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

#include "falawn/thread_pool.hpp"

#include <cstdlib>

namespace falawn {

namespace {
thread_local bool tls_inside_pool = false;
} // namespace

ThreadPool::ThreadPool(int workers) {
    const int extra = workers - 1;
    for (int i = 0; i < extra; ++i)
        threads_.emplace_back([this] { worker_loop(); });
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stopping_ = true;
    }
    wake_.notify_all();
    for (auto &t : threads_)
        t.join();
}

void ThreadPool::run_share(const std::shared_ptr<Job> &job) {
    for (;;) {
        const int index = job->cursor.fetch_add(1, std::memory_order_relaxed);
        if (index >= job->count)
            return;
        job->fn(index);
        job->done.fetch_add(1, std::memory_order_acq_rel);
    }
}

void ThreadPool::worker_loop() {
    tls_inside_pool = true;
    std::uint64_t seen = 0;
    for (;;) {
        std::shared_ptr<Job> job;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            wake_.wait(lock, [&] {
                return stopping_ || (job_ != nullptr && job_->id != seen);
            });
            if (stopping_)
                return;
            job = job_;
            seen = job->id;
        }
        run_share(job);
        { std::lock_guard<std::mutex> lock(mutex_); } // pair with the waiter
        finished_.notify_all();
    }
}

void ThreadPool::parallel_indexed(int count, std::function<void(int)> fn) {
    if (count <= 0)
        return;
    // run inline when the pool has no helpers or when called from inside one
    // of them (a nested wait on the single job slot would deadlock)
    if (threads_.empty() || tls_inside_pool || count == 1) {
        for (int i = 0; i < count; ++i)
            fn(i);
        return;
    }

    auto job = std::make_shared<Job>();
    job->fn = std::move(fn);
    job->count = count;
    {
        std::lock_guard<std::mutex> lock(mutex_);
        job->id = ++job_serial_;
        job_ = job;
    }
    wake_.notify_all();

    run_share(job); // the caller works too

    {
        std::unique_lock<std::mutex> lock(mutex_);
        finished_.wait(lock, [&] {
            return job->done.load(std::memory_order_acquire) == count;
        });
        job_.reset();
    }
}

int ThreadPool::resolve_worker_count(int requested) {
    if (requested > 0)
        return requested;
    if (const char *env = std::getenv("FA_LAWN_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0)
            return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

} // namespace falawn
