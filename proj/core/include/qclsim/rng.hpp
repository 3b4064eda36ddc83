#pragma once

#include <cstdint>
#include <random>

namespace qclsim {

/// SplitMix64 finalizer; used to derive independent seeds from (master, index).
std::uint64_t mix64(std::uint64_t x);

/// Seed of stream `index` under `master`:
///   mix64(master ^ mix64(index + 0x9E3779B97F4A7C15)).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

/// Per-trajectory random stream. Trajectory i of a run uses
/// RandomStream(seed, i); initial-condition sampling uses kSamplingStream.
class RandomStream {
 public:
  RandomStream(std::uint64_t master, std::uint64_t index);

  double uniform();  // [0, 1)
  double normal();   // N(0, 1)
  std::size_t below(std::size_t n);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

inline constexpr std::uint64_t kSamplingStream = 0xFFFF'FFFF'FFFF'FFFFull;

}  // namespace qclsim
