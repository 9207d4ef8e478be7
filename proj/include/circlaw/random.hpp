#pragma once

#include <cstdint>
#include <limits>

namespace circlaw {

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-based generator keyed by (seed, a, b). Each key yields an
/// independent stream, so results never depend on the order in which
/// streams are consumed. Satisfies UniformRandomBitGenerator, which lets the
/// standard distributions draw from it.
class SubStream {
 public:
  using result_type = std::uint64_t;

  constexpr SubStream(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) noexcept
      : key_(splitmix64(splitmix64(splitmix64(seed) ^ a) ^ (b * 0xd1b54a32d192ed03ULL))) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    return splitmix64(key_ + 0x9e3779b97f4a7c15ULL * ++counter_);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace circlaw
