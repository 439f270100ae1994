#ifndef FCLT_RNG_HPP
#define FCLT_RNG_HPP

#include <cstdint>
#include <cstddef>

namespace fclt {

// Counter-based splittable stream (Philox4x32-10, Salmon et al. SC 2011).
// A stream is identified by (seed, stream_id); the 128-bit counter is
// [draw_lo, draw_hi, stream_lo, stream_hi] and the key is the seed, so
// distinct stream ids index disjoint counter ranges of the same cipher.
// Identical (seed, stream_id) always reproduce the same draw sequence,
// which is what the parallel harness relies on for chunked determinism.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  std::uint64_t next_u64() noexcept;

  // Uniform on [0,1) with 53 random bits.
  double next_uniform() noexcept;

  // Standard normal via the polar (Marsaglia) method; pairs are cached.
  double next_gaussian() noexcept;

  // Derived stream, statistically independent of this one and of any
  // other child index. Pure function of (seed, stream_id, child).
  RngStream split(std::uint64_t child) const noexcept;

 private:
  void refill() noexcept;

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t draw_counter_ = 0;  // philox block index
  std::uint32_t block_[4] = {0, 0, 0, 0};
  int block_pos_ = 4;  // consumed 32-bit lanes in block_
  double cached_gaussian_ = 0.0;
  bool has_cached_gaussian_ = false;
};

// SplitMix64 finalizer; used for stream-id derivation.
std::uint64_t mix64(std::uint64_t z) noexcept;

}  // namespace fclt

#endif
