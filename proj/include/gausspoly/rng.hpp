#pragma once

#include <array>
#include <cstdint>
#include <utility>

namespace gausspoly {

/// Counter-based random stream on top of Philox4x64-10.
///
/// Block i of stream (seed, stream_id) is Philox(key = {seed, 0},
/// ctr = {i, stream_id, 0, 0}); the stream is the triple plus a counter, so
/// (seed, stream_id, counter) fully determines every future output. Streams
/// are cheap values: copy one to fork a replay, give each worker its own
/// stream_id to split.
class RngStream {
 public:
  using Block = std::array<std::uint64_t, 4>;

  RngStream(std::uint64_t seed, std::uint64_t stream_id, std::uint64_t counter = 0) noexcept
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  /// The raw 256-bit block at the current counter; advances the counter by one.
  Block next_block() noexcept;

  std::uint64_t next_u64() noexcept { return next_block()[0]; }

  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform() noexcept;

  /// Two independent standard normals from one block (Box-Muller).
  std::pair<double, double> normal_pair() noexcept;

  /// One standard normal; consumes a whole block.
  double normal() noexcept { return normal_pair().first; }

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t counter() const noexcept { return counter_; }

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
};

/// Philox4x64 with 10 rounds.
RngStream::Block philox4x64(const RngStream::Block& counter,
                            const std::array<std::uint64_t, 2>& key) noexcept;

/// Maps 64 random bits to a double in (0, 1).
double to_open_unit(std::uint64_t bits) noexcept;

}  // namespace gausspoly
