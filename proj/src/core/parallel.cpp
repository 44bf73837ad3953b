#include "core/parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

namespace gpd {
namespace {

int resolve_count(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GLACIER_PD_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// Persistent pool; workers grab fixed-size chunks from an atomic cursor.
class Pool {
 public:
  explicit Pool(int n) : stop_(false), job_gen_(0) {
    for (int t = 0; t < n - 1; ++t) {
      workers_.emplace_back([this] { worker_loop(); });
    }
  }

  ~Pool() {
    {
      std::lock_guard<std::mutex> lk(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& w : workers_) w.join();
  }

  int size() const { return static_cast<int>(workers_.size()) + 1; }

  void run(std::size_t n, std::size_t grain,
           const std::function<void(std::size_t, std::size_t)>& fn) {
    if (n == 0) return;
    if (grain == 0) grain = 1;
    std::size_t chunks = (n + grain - 1) / grain;
    if (workers_.empty() || chunks == 1) {
      for (std::size_t c = 0; c < chunks; ++c) {
        std::size_t b = c * grain;
        fn(b, std::min(n, b + grain));
      }
      return;
    }
    {
      std::lock_guard<std::mutex> lk(mu_);
      job_n_ = n;
      job_grain_ = grain;
      job_chunks_ = chunks;
      job_fn_ = &fn;
      cursor_.store(0, std::memory_order_relaxed);
      pending_.store(static_cast<long>(chunks), std::memory_order_relaxed);
      ++job_gen_;
    }
    cv_.notify_all();
    drain();
    // Wait for stragglers still inside fn.
    std::unique_lock<std::mutex> lk(mu_);
    done_cv_.wait(lk, [this] { return pending_.load() == 0; });
    job_fn_ = nullptr;
  }

 private:
  void drain() {
    const auto* fn = job_fn_;
    for (;;) {
      std::size_t c = cursor_.fetch_add(1, std::memory_order_relaxed);
      if (c >= job_chunks_) break;
      std::size_t b = c * job_grain_;
      (*fn)(b, std::min(job_n_, b + job_grain_));
      if (pending_.fetch_sub(1) == 1) done_cv_.notify_all();
    }
  }

  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t, std::size_t)>* fn = nullptr;
      {
        std::unique_lock<std::mutex> lk(mu_);
        cv_.wait(lk, [&] { return stop_ || job_gen_ != seen; });
        if (stop_) return;
        seen = job_gen_;
        fn = job_fn_;
      }
      if (!fn) continue;
      for (;;) {
        std::size_t c = cursor_.fetch_add(1, std::memory_order_relaxed);
        if (c >= job_chunks_) break;
        std::size_t b = c * job_grain_;
        (*fn)(b, std::min(job_n_, b + job_grain_));
        if (pending_.fetch_sub(1) == 1) done_cv_.notify_all();
      }
    }
  }

  std::vector<std::thread> workers_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable done_cv_;
  bool stop_;
  std::uint64_t job_gen_;
  std::size_t job_n_ = 0, job_grain_ = 0, job_chunks_ = 0;
  const std::function<void(std::size_t, std::size_t)>* job_fn_ = nullptr;
  std::atomic<std::size_t> cursor_{0};
  std::atomic<long> pending_{0};
};

std::mutex g_pool_mu;
Pool* g_pool = nullptr;
int g_requested = 0;

Pool& pool() {
  std::lock_guard<std::mutex> lk(g_pool_mu);
  if (!g_pool) g_pool = new Pool(resolve_count(g_requested));
  return *g_pool;
}

}  // namespace

void set_thread_count(int n) {
  std::lock_guard<std::mutex> lk(g_pool_mu);
  g_requested = n;
  delete g_pool;
  g_pool = new Pool(resolve_count(n));
}

int thread_count() { return pool().size(); }

void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& fn) {
  pool().run(n, grain, fn);
}

std::size_t chunk_count(std::size_t n, std::size_t grain) {
  if (grain == 0) grain = 1;
  return (n + grain - 1) / grain;
}

}  // namespace gpd
