#pragma once

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <mutex>
#include <optional>
#include <thread>
#include <vector>

namespace sgnn {

/// Runs work(i) for i in [0, count) on up to `jobs` threads and calls
/// emit(i, result) on the calling thread in index order as results arrive.
/// `work` must not throw; encode failures in the result.
template <typename Result, typename Work, typename Emit>
void run_ordered(std::size_t count, int jobs, Work&& work, Emit&& emit) {
  const std::size_t workers = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(jobs, 1)), 1,
                                                      std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < count; ++i) emit(i, work(i));
    return;
  }
  std::vector<std::optional<Result>> slots(count);
  std::mutex mu;
  std::condition_variable ready;
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    threads.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        Result r = work(i);
        {
          std::lock_guard lock(mu);
          slots[i] = std::move(r);
        }
        ready.notify_all();
      }
    });
  }
  for (std::size_t i = 0; i < count; ++i) {
    std::unique_lock lock(mu);
    ready.wait(lock, [&] { return slots[i].has_value(); });
    Result r = std::move(*slots[i]);
    slots[i].reset();
    lock.unlock();
    emit(i, std::move(r));
  }
  for (auto& t : threads) t.join();
}

}  // namespace sgnn
