#pragma once

#include <array>
#include <cstdint>

namespace chessboard {

// Philox4x32-10 counter-based generator (Salmon et al., SC 2011).
// A block is a pure function of (counter, key), which gives every loop
// index its own stream: key = simulation seed, counter = (loop index,
// block number). Results are therefore independent of thread scheduling
// and worker count.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0],
             static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1],
             static_cast<std::uint32_t>(p0)};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Buffered word stream for one Monte Carlo loop index.
class LoopRng {
 public:
  LoopRng(std::uint64_t seed, std::uint64_t loop_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        loop_lo_(static_cast<std::uint32_t>(loop_index)),
        loop_hi_(static_cast<std::uint32_t>(loop_index >> 32)) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  // Uniform double in [0,1) with 32-bit resolution.
  double next_double() { return next_u32() * 0x1p-32; }

 private:
  void refill() {
    buf_ = Philox4x32::block({loop_lo_, loop_hi_, block_, 0u}, key_);
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint32_t, 2> key_;
  std::uint32_t loop_lo_, loop_hi_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

// Fixed-point threshold for "u32 < threshold" Bernoulli draws;
// 2^32 (not representable in u32) is handled by the wider type.
constexpr std::uint64_t bernoulli_threshold(double p) {
  if (p <= 0.0) return 0;
  if (p >= 1.0) return 1ull << 32;
  return static_cast<std::uint64_t>(p * 4294967296.0 + 0.5);
}

}  // namespace chessboard
