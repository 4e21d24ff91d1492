#pragma once

#include <array>
#include <cstdint>
#include <initializer_list>

namespace lrcert {

// Philox4x32-10 block function (Salmon et al., "Parallel random numbers: as
// easy as 1, 2, 3"). Maps a 128-bit counter and a 64-bit key to 128 bits.
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

// Mixes a path of integers (for example {iteration, trajectory}) into a single
// 64-bit stream id with the SplitMix64 finalizer.
std::uint64_t derive_stream_id(std::initializer_list<std::uint64_t> path) noexcept;

/// A counter-based random stream.
///
/// The stream is keyed by the root seed; the counter's upper 64 bits hold the
/// stream id and the lower 64 bits the block index. Two streams with distinct
/// ids never share a block, so rollouts can be generated in any order or on
/// any thread and still reproduce bit for bit.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint32_t next_u32() noexcept;
  std::uint64_t next_u64() noexcept;

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;
  double uniform(double lo, double hi) noexcept;

  // Standard normal by the Box-Muller transform; consumes two uniforms.
  double normal() noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  // Number of 32-bit words drawn so far.
  std::uint64_t position() const noexcept { return block_ * 4 + lane_ - 4; }

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  unsigned lane_ = 4;
};

}  // namespace lrcert
