#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <unordered_set>
#include <vector>

namespace rlr::util {

// splitmix64 finaliser; derives independent stream seeds from a run seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// mt19937_64 output is fixed by the standard but the <random> distributions
// are not, so sampling is done here to keep runs identical across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  std::uint64_t next() { return gen_(); }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return uniform() < p; }

  // Uniform in [0, n), unbiased by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = -n % n;  // 2^64 mod n
    while (true) {
      std::uint64_t x = next();
      if (x >= limit) return x % n;
    }
  }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

  // m distinct indices from [0, n), sorted ascending (Floyd's algorithm).
  std::vector<std::size_t> sample(std::size_t n, std::size_t m) {
    m = std::min(m, n);
    std::unordered_set<std::size_t> chosen;
    chosen.reserve(m * 2);
    for (std::size_t j = n - m; j < n; ++j) {
      std::size_t t = below(j + 1);
      if (!chosen.insert(t).second) chosen.insert(j);
    }
    std::vector<std::size_t> out(chosen.begin(), chosen.end());
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace rlr::util
