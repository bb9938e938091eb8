#pragma once

#include <cstdint>
#include <vector>

namespace mcurv {

// splitmix64: tiny deterministic generator. Standard library distributions are
// implementation-defined, so seeded outputs (profiles, expansion estimates)
// derive all randomness from this instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform in [0, n) by rejection, bias-free.
  std::uint64_t next_below(std::uint64_t n) {
    std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      std::uint64_t r = next_u64();
      if (r >= threshold) return r % n;
    }
  }

  // k distinct values from [0, n), in draw order (partial Fisher-Yates).
  std::vector<int> sample_distinct(int n, int k);

  // Shuffled 0..n-1.
  std::vector<int> permutation(int n);

 private:
  std::uint64_t state_;
};

inline std::vector<int> Rng::sample_distinct(int n, int k) {
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(next_below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

inline std::vector<int> Rng::permutation(int n) { return sample_distinct(n, n); }

}  // namespace mcurv
