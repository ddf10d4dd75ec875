#pragma once

// Counter-based random streams.
//
// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as 1, 2, 3")
// keyed by the 64-bit master seed. The 128-bit counter is laid out as
// (block_lo, block_hi, replication, tag), so every (seed, replication, tag)
// triple names an independent stream that can be generated on any thread
// without coordination.

#include <array>
#include <cstdint>

namespace volmat {

using PhiloxBlock = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxBlock philox4x32_10(PhiloxBlock counter, PhiloxKey key);

class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint32_t replication, std::uint32_t tag);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  double uniform(double low, double high) { return low + (high - low) * uniform(); }
  /// Standard normal by the Box-Muller transform.
  double normal();

 private:
  PhiloxKey key_;
  std::uint32_t replication_;
  std::uint32_t tag_;
  std::uint64_t block_ = 0;
  PhiloxBlock buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace volmat
