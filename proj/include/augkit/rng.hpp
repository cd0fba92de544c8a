#pragma once

#include <cstdint>

namespace augkit {

/// Counter-based random stream (Philox4x32-10).
///
/// The 64-bit seed is the cipher key; the stream index and the draw counter
/// form the 128-bit counter block. Draw i of stream s is a pure function of
/// (seed, s, i), so streams can be handed to any thread in any order.
class RngState {
 public:
  RngState() = default;
  RngState(std::uint64_t seed, std::uint64_t stream, std::uint64_t counter = 0)
      : seed_(seed), stream_(stream), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }
  std::uint64_t counter() const { return counter_; }

  std::uint64_t next_u64();
  /// Uniform integer in [0, bound); bound must be positive. Unbiased.
  std::uint64_t uniform_index(std::uint64_t bound);
  /// Uniform integer in [lo, hi].
  int uniform_int(int lo, int hi);
  /// Uniform real in [0, 1) with 53 random bits.
  double uniform01();
  bool bernoulli(double p) { return uniform01() < p; }
  /// -1 or +1 with equal probability.
  int sign() { return (next_u64() >> 63) != 0 ? 1 : -1; }

  friend bool operator==(const RngState&, const RngState&) = default;

 private:
  std::uint64_t seed_ = 0;
  std::uint64_t stream_ = 0;
  std::uint64_t counter_ = 0;
};

/// Stream id for one (image, replica) pair under a master seed.
std::uint64_t derive_stream(std::uint64_t master_seed, std::uint64_t image_index,
                            std::uint64_t replica_index);

/// Raw Philox4x32-10 block function, exposed for known-answer tests.
struct PhiloxBlock {
  std::uint32_t v[4];
};
PhiloxBlock philox4x32_10(PhiloxBlock counter, std::uint32_t key0, std::uint32_t key1);

}  // namespace augkit
