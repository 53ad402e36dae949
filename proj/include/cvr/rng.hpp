#ifndef CVR_RNG_HPP
#define CVR_RNG_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <vector>

namespace cvr {

// All randomness in the library flows through the generators below so that
// datasets, permutations and optimizer traces are reproducible from a seed
// alone, independent of the standard library implementation.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a decorrelated subkey from (key, stream). Used to split one user
// seed into independent streams (data, shuffling, sampling, permutations).
inline std::uint64_t mix_u64(std::uint64_t key, std::uint64_t stream) {
  std::uint64_t s = key;
  splitmix64_next(s);
  s ^= stream;
  return splitmix64_next(s);
}

class Xoshiro256ss {
 public:
  explicit Xoshiro256ss(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1]; safe as a log() argument.
  double uniform01_pos() {
    return (static_cast<double>(next() >> 11) + 1.0) * 0x1.0p-53;
  }

  // Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next()) * bound) >> 64);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

// Standard normal variates via Box-Muller on the raw uniform stream. The
// transform is pinned (not std::normal_distribution) so that generated
// datasets are stable across standard libraries.
class NormalSampler {
 public:
  explicit NormalSampler(Xoshiro256ss& rng) : rng_(&rng) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = rng_->uniform01_pos();
    const double u2 = rng_->uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

 private:
  Xoshiro256ss* rng_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Fisher-Yates permutation of {0, ..., n-1}, a pure function of `key`.
inline std::vector<std::size_t> random_permutation(std::size_t n,
                                                   std::uint64_t key) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Xoshiro256ss rng(key);
  for (std::size_t i = n; i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

// Named streams hung off one run seed.
namespace stream {
inline constexpr std::uint64_t kData = 0x64617461;      // dataset entries
inline constexpr std::uint64_t kShuffle = 0x73687566;   // row shuffling
inline constexpr std::uint64_t kSampler = 0x73616d70;   // index sampling
inline constexpr std::uint64_t kPermute = 0x7065726d;   // per-epoch permutations
}  // namespace stream

// Key for the epoch permutation of worker `salt` (0 = single-worker runs).
inline std::uint64_t permutation_key(std::uint64_t seed, std::uint64_t salt,
                                     std::uint64_t epoch) {
  return mix_u64(mix_u64(mix_u64(seed, stream::kPermute), salt), epoch);
}

inline std::uint64_t sampler_key(std::uint64_t seed, std::uint64_t salt) {
  return mix_u64(mix_u64(seed, stream::kSampler), salt);
}

}  // namespace cvr

#endif  // CVR_RNG_HPP
