#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace lexsent {

// FNV-1a, used wherever a stable content hash is needed (seeding OOV vectors,
// model checksums). Stable across platforms and processes.
inline uint64_t fnv1a(std::string_view data) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// mt19937_64 with explicit output mapping. std::uniform_real_distribution is
// implementation-defined, so draws go through a fixed 53-bit conversion to
// keep streams identical across standard libraries.
class DeterministicRng {
 public:
  explicit DeterministicRng(uint64_t seed) : gen_(seed) {}

  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

  uint64_t next_below(uint64_t n) { return n == 0 ? 0 : gen_() % n; }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[next_below(i)]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace lexsent
