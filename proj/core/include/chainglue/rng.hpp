#ifndef CHAINGLUE_RNG_HPP
#define CHAINGLUE_RNG_HPP

#include <cstdint>
#include <random>

namespace chainglue {

/// One step of the splitmix64 sequence; advances `state`.
std::uint64_t splitmix64(std::uint64_t& state);

/// Seedable 64-bit Mersenne Twister with reproducible stream splitting.
///
/// The engine of stream k is seeded with the second splitmix64 output of
/// (seed + k * 0x9E3779B97F4A7C15), so split(k) depends only on the base seed
/// and k, never on how much the parent has been used. Uniform and
/// exponential variates are derived from raw engine bits by hand rather than
/// through <random> distributions, whose output is implementation defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0);

  Rng split(std::uint64_t stream) const { return Rng(seed_, stream); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Exponential with the given rate, by inverse CDF.
  double exponential(double rate);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
};

}  // namespace chainglue

#endif  // CHAINGLUE_RNG_HPP
