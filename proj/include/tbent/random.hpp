#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace tbent {

/// Identifies the generator and the sub-stream derivation rule. Embedded in
/// every output file; bump it whenever either changes.
inline constexpr std::string_view kRngVersion = "mt19937_64+splitmix64-v1";

/// SplitMix64 finalizer, used to derive independent sub-stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept {
  return splitmix64(splitmix64(seed) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

/// Seeded uniform stream. The raw engine output is converted to doubles by
/// hand so that results do not depend on the standard library's
/// distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  /// Stream for one disorder realization; depends only on (seed, index).
  static RandomStream for_realization(std::uint64_t seed, std::uint64_t index) {
    return RandomStream(derive_seed(seed, index));
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tbent
