// core/src/parallel.cpp

// Copyright 2026  The trajloc Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "trajloc/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace trajloc {
namespace {

int env_worker_count() {
  if (const char* env = std::getenv("TRAJLOC_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) {
      return n;
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::atomic<int> g_workers{0};  // 0 = not yet initialized

// Nested parallel_for calls run inline on the calling worker.
thread_local bool tl_in_job = false;

// Long-lived pool; workers sleep between jobs.  A job is one parallel_for
// call: each worker grabs chunk indices from a shared counter.
class Pool {
 public:
  explicit Pool(int threads) {
    for (int i = 0; i < threads; ++i) {
      threads_.emplace_back([this] { worker_loop(); });
    }
  }

  ~Pool() {
    {
      std::unique_lock lock(mu_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : threads_) {
      t.join();
    }
  }

  void run(std::int64_t chunks, std::int64_t n,
           const std::function<void(std::int64_t, std::int64_t)>& fn) {
    std::unique_lock lock(mu_);
    fn_ = &fn;
    total_n_ = n;
    total_chunks_ = chunks;
    next_chunk_ = 0;
    pending_ = chunks;
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [this] { return pending_ == 0; });
    fn_ = nullptr;
  }

 private:
  void run_chunk(std::int64_t chunk,
                 const std::function<void(std::int64_t, std::int64_t)>& fn) {
    const std::int64_t per = (total_n_ + total_chunks_ - 1) / total_chunks_;
    const std::int64_t begin = chunk * per;
    const std::int64_t end = std::min(total_n_, begin + per);
    if (begin < end) {
      tl_in_job = true;
      fn(begin, end);
      tl_in_job = false;
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    std::unique_lock lock(mu_);
    while (true) {
      wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
      if (stop_) {
        return;
      }
      seen = generation_;
      while (next_chunk_ < total_chunks_) {
        const std::int64_t chunk = next_chunk_++;
        const auto* fn = fn_;
        lock.unlock();
        run_chunk(chunk, *fn);
        lock.lock();
        if (--pending_ == 0) {
          done_.notify_all();
        }
      }
    }
  }

  std::mutex mu_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::vector<std::thread> threads_;
  const std::function<void(std::int64_t, std::int64_t)>* fn_ = nullptr;
  std::int64_t total_n_ = 0;
  std::int64_t total_chunks_ = 0;
  std::int64_t next_chunk_ = 0;
  std::int64_t pending_ = 0;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

Pool& pool() {
  static Pool p(worker_count());
  return p;
}

}  // namespace

int worker_count() {
  int n = g_workers.load();
  if (n == 0) {
    n = env_worker_count();
    g_workers.store(n);
  }
  return n;
}

void set_worker_count(int n) { g_workers.store(n < 1 ? 1 : n); }

void parallel_for(std::int64_t n,
                  const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) {
    return;
  }
  const int workers = worker_count();
  if (workers <= 1 || n < 64 || tl_in_job) {
    fn(0, n);
    return;
  }
  pool().run(std::min<std::int64_t>(workers, n), n, fn);
}

}  // namespace trajloc
