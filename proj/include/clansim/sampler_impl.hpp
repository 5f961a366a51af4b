#ifndef CLANSIM_SAMPLER_IMPL_HPP
#define CLANSIM_SAMPLER_IMPL_HPP

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

namespace clansim {

template <class T>
std::vector<T> run_indexed(std::uint64_t n, int threads,
                           const std::function<T(std::uint64_t)>& job) {
  std::vector<std::optional<T>> slots(n);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::uint64_t i = next.fetch_add(1);
      if (i >= n) {
        return;
      }
      try {
        slots[i].emplace(job(i));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) {
          failure = std::current_exception();
        }
        next.store(n);
        return;
      }
    }
  };
  const auto count = static_cast<std::uint64_t>(std::max(threads, 1));
  if (count == 1 || n < 2) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::uint64_t t = 0; t < std::min(count, n); ++t) {
      pool.emplace_back(worker);
    }
    for (auto& t : pool) {
      t.join();
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& s : slots) {
    out.push_back(std::move(*s));
  }
  return out;
}

}  // namespace clansim

#endif  // CLANSIM_SAMPLER_IMPL_HPP
