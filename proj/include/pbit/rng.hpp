#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace pbit {

// splitmix64 finalizer; used for seed scrambling and hash combination.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t h, std::uint64_t v) {
  return splitmix64(h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)));
}

// Child seed for one (graph, c grid index, replicate) task. Stable across
// platforms and thread counts; the sweep fan-out depends on nothing else.
std::uint64_t derive_seed(std::uint64_t master_seed, std::string_view graph_name,
                          std::uint64_t c_index, std::uint64_t replicate);

// One stochastic stream per simulation run. The draw order (mask draws for
// all sites, then resample draws for selected sites in index order) is part
// of the reproducibility contract. Conversions are hand-rolled because
// std::uniform_real_distribution output is implementation-defined.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed) : gen_(splitmix64(seed)) {}

  // uniform in [0, 1), 53-bit resolution
  double uniform01() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [-1, 1)
  double uniform_pm1() { return 2.0 * uniform01() - 1.0; }

  bool bernoulli(double p) { return uniform01() < p; }

  std::int8_t random_spin() {
    return (gen_() >> 63) != 0 ? std::int8_t{1} : std::int8_t{-1};
  }

  std::uint64_t next_u64() { return gen_(); }

 private:
  std::mt19937_64 gen_;
};

}  // namespace pbit
