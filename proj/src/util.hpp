#pragma once

#include <atomic>
#include <functional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

namespace lexsent {

std::string read_file(const std::string& path);
void write_file(const std::string& path, std::string_view content);

std::vector<std::string> split(std::string_view text, char sep);
std::string_view trim(std::string_view text);
std::string to_lower(std::string_view text);

// Runs fn(i) for i in [0, n), filling results by index. Output order (and
// therefore any reduction done by the caller in index order) does not depend
// on the thread count. If any call throws, the exception with the lowest
// index is rethrown after all workers finish, so failures are deterministic
// too.
template <typename R>
std::vector<R> parallel_map(size_t n, int threads,
                            const std::function<R(size_t)>& fn) {
  std::vector<R> results(n);
  if (threads <= 1 || n <= 1) {
    for (size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }
  std::vector<std::exception_ptr> errors(n);
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  size_t pool = std::min<size_t>(threads, n);
  std::vector<std::thread> workers;
  workers.reserve(pool);
  for (size_t t = 0; t < pool; ++t) workers.emplace_back(worker);
  for (auto& w : workers) w.join();
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  return results;
}

}  // namespace lexsent
