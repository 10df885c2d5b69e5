#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace alq {

/// Seeded 64-bit random stream.
///
/// The engine is a 64-bit Mersenne twister whose seed is a SplitMix64 hash of
/// (seed, stream_id), so every (seed, stream_id) pair yields the same sequence
/// on every conforming platform and distinct stream ids give unrelated states.
/// A stream is owned by exactly one caller: it can be moved between threads
/// but not copied.
class RngStream {
 public:
  using result_type = std::uint64_t;

  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  RngStream(const RngStream&) = delete;
  RngStream& operator=(const RngStream&) = delete;
  RngStream(RngStream&&) noexcept = default;
  RngStream& operator=(RngStream&&) noexcept = default;

  static constexpr result_type min() { return std::mt19937_64::min(); }
  static constexpr result_type max() { return std::mt19937_64::max(); }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);

/// Stages of a jitter replicate that consume randomness.
enum class StreamPhase : std::uint64_t {
  kChain = 0,    // the Gibbs sweep itself
  kRefresh = 1,  // the single post-chain jitter used for NLL and DIC
};

/// Stream id for replicate `jitter_index` (1-based) in `phase`.
constexpr std::uint64_t replicate_stream_id(std::uint64_t jitter_index, StreamPhase phase) {
  return (jitter_index << 8) | static_cast<std::uint64_t>(phase);
}

}  // namespace alq
