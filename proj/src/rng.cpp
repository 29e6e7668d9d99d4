#include "gausspoly/rng.hpp"

#include <cmath>

namespace gausspoly {

namespace {

constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;

__extension__ using u128 = unsigned __int128;

inline void mulhilo(std::uint64_t a, std::uint64_t b, std::uint64_t& hi, std::uint64_t& lo) {
  const u128 p = static_cast<u128>(a) * b;
  hi = static_cast<std::uint64_t>(p >> 64);
  lo = static_cast<std::uint64_t>(p);
}

}  // namespace

RngStream::Block philox4x64(const RngStream::Block& counter,
                            const std::array<std::uint64_t, 2>& key) noexcept {
  RngStream::Block c = counter;
  std::uint64_t k0 = key[0];
  std::uint64_t k1 = key[1];
  for (int round = 0; round < 10; ++round) {
    if (round > 0) {
      k0 += kWeyl0;
      k1 += kWeyl1;
    }
    std::uint64_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, c[0], hi0, lo0);
    mulhilo(kMul1, c[2], hi1, lo1);
    c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
  }
  return c;
}

double to_open_unit(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

RngStream::Block RngStream::next_block() noexcept {
  const Block out = philox4x64({counter_, stream_id_, 0, 0}, {seed_, 0});
  ++counter_;
  return out;
}

double RngStream::uniform() noexcept { return to_open_unit(next_u64()); }

std::pair<double, double> RngStream::normal_pair() noexcept {
  constexpr double two_pi = 6.283185307179586476925286766559;
  const Block b = next_block();
  const double radius = std::sqrt(-2.0 * std::log(to_open_unit(b[0])));
  const double angle = two_pi * to_open_unit(b[1]);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace gausspoly
