#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace adasearch {

/// Base seed for a run. Identical seed and config give an identical trial.
struct RngSeed {
  std::uint64_t value = 0;
};

using Rng = std::mt19937_64;

std::uint64_t splitmix64(std::uint64_t x);

/// Mixes a base seed with a path of stream labels into an independent seed.
/// Used to key streams by (trial, purpose, round, step) so that algorithms
/// run on matched seeds draw common random numbers where their dwell overlaps.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

Rng make_rng(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Uniform double in [0, 1) from the top 53 bits. Portable across standard
/// libraries, unlike std::uniform_real_distribution.
double uniform01(Rng& rng);

/// Uniform integer in [0, n) by rejection; n > 0.
std::uint64_t uniform_index(Rng& rng, std::uint64_t n);

/// Standard normal via Box-Muller.
double standard_normal(Rng& rng);

// Stream purposes.
namespace stream {
inline constexpr std::uint64_t kEnvironment = 0x656e76;
inline constexpr std::uint64_t kMeasurement = 0x6d6561;
inline constexpr std::uint64_t kPlanner = 0x706c6e;
inline constexpr std::uint64_t kInfoMaxMeasurement = 0x696d6d;
}  // namespace stream

}  // namespace adasearch
