#pragma once

#include <cstdint>
#include <limits>

namespace sedsim::rng {

/// SplitMix64 finalizer (Steele, Lea & Flood 2014).
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

/// What a substream is used for. Values are part of the frozen derivation
/// rule and must never be renumbered.
enum class Purpose : std::uint64_t {
  kPhiOffset = 1,  // per-(i,j) azimuth offsets of the spherical grid
  kCosTheta = 2,   // polar direction cosines
  kPhi = 3,        // azimuth angles
  kChi = 4,        // polarization rotation angles
  kPhase = 5,      // per-(mode, polarization) field phases
};

/// Counter-based generator: the i-th output is mix64(key + i * golden).
/// Any output can be computed without generating its predecessors, and
/// streams with different keys are statistically independent.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t key) noexcept : key_(key) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type at(std::uint64_t index) const noexcept {
    return mix64(key_ + (index + 1) * kGolden);
  }

  constexpr result_type operator()() noexcept { return at(counter_++); }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform01() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  constexpr double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform01();
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t position() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Substream key rule: key = mix64(seed ^ mix64(purpose * golden)).
constexpr Stream substream(std::uint64_t seed, Purpose purpose) noexcept {
  return Stream(mix64(seed ^ mix64(static_cast<std::uint64_t>(purpose) * kGolden)));
}

/// Ensemble member seed rule: seed_i = mix64(mix64(master) + (i + 1) * golden).
/// Frozen; changing it changes every stored ensemble.
constexpr std::uint64_t member_seed(std::uint64_t master, std::uint64_t index) noexcept {
  return mix64(mix64(master) + (index + 1) * kGolden);
}

}  // namespace sedsim::rng
