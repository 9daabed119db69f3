#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace bnras {

/// SplitMix64 output function. Used to decorrelate seeds.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `index` under `master`:
///   splitmix64(master ^ splitmix64(index + 0x9E3779B97F4A7C15)).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) noexcept;

/// Deterministic uniform source backed by std::mt19937_64, whose output
/// sequence is fixed by the C++ standard. Doubles take the top 53 bits, so
/// the same seed yields the same draws with every conforming library.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Stream `index` of the family rooted at `master`.
  static RandomStream derive(std::uint64_t master, std::uint64_t index) {
    return RandomStream(derive_seed(master, index));
  }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1} as floor(uniform() * n). One draw.
  std::size_t index(std::size_t n) {
    const auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
  }

  bool operator==(const RandomStream& other) const {
    return seed_ == other.seed_ && engine_ == other.engine_;
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
};

}  // namespace bnras
