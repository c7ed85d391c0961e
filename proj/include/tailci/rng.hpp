#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include <boost/random/normal_distribution.hpp>

namespace tailci {

/// Mixes a master seed with stream identifiers (draw index, cell index, ...)
/// into an independent 64-bit seed. SplitMix64 finalizer per component.
std::uint64_t derive_seed(std::uint64_t master,
                          std::initializer_list<std::uint64_t> stream_ids) noexcept;

/// Seeded generator used by every simulation routine. Output depends only on
/// the seed, never on the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const noexcept { return seed_; }

  /// Uniform on (0, 1] with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
  }

  /// Standard normal (ziggurat).
  double normal() { return normal_(engine_); }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tailci
