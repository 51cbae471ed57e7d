#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string_view>

#if defined(__SSE2__)
#include <immintrin.h>
#endif

namespace spde_lrt {

// Identifier echoed into every output so a run can be reproduced bit-for-bit.
inline constexpr std::string_view kRngAlgorithm = "philox4x32-10/ziggurat128-v1";

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

// Philox4x32 with 10 rounds (Salmon et al., SC'11).
constexpr PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
  constexpr std::uint32_t kMul0 = 0xD2511F53u;
  constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
  for (int r = 0; r < 10; ++r) {
    if (r > 0) {
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
  }
  return ctr;
}

// Stream of 64-bit words keyed by (seed, stream id). Word w of the stream is a
// pure function of (seed, stream id, w): block b = w / 2 is
// philox(ctr = {b_lo, b_hi, id_lo, id_hi}, key = {seed_lo, seed_hi}).
class CounterStream {
 public:
  CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_id)),
        stream_hi_(static_cast<std::uint32_t>(stream_id >> 32)) {}

  std::uint64_t next_u64() noexcept {
    if (pos_ == kBufferWords) refill();
    return buffer_[pos_++];
  }

  // Uniform on the open interval (0, 1) with 53 random bits.
  double next_uniform() noexcept {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::uint64_t words_consumed() const noexcept {
    return block_ * 2 - (kBufferWords - pos_);
  }

 private:
  static constexpr int kBlocks = 16;
  static constexpr int kBufferWords = 2 * kBlocks;

  // All blocks of the buffer go through the rounds in lockstep; the vector
  // paths are integer-only, so every path yields the same words.
  void refill() noexcept {
#if defined(__AVX2__)
    refill_avx2();
#elif defined(__SSE2__)
    refill_sse2();
#else
    refill_scalar();
#endif
    block_ += kBlocks;
    pos_ = 0;
  }

  void refill_scalar() noexcept {
    for (int b = 0; b < kBlocks; ++b) {
      const std::uint64_t blk = block_ + static_cast<std::uint64_t>(b);
      const PhiloxCounter out = philox4x32_10(
          {static_cast<std::uint32_t>(blk), static_cast<std::uint32_t>(blk >> 32), stream_lo_,
           stream_hi_},
          key_);
      store(b, out[0], out[1], out[2], out[3]);
    }
  }

  void store(int b, std::uint64_t c0, std::uint64_t c1, std::uint64_t c2, std::uint64_t c3) noexcept {
    buffer_[2 * b] = (c0 & 0xFFFFFFFFu) | (c1 << 32);
    buffer_[2 * b + 1] = (c2 & 0xFFFFFFFFu) | (c3 << 32);
  }

#if defined(__AVX2__)
  // Four blocks per register, one 32-bit word per 64-bit lane.
  void refill_avx2() noexcept {
    constexpr int kVec = kBlocks / 4;
    const __m256i mask = _mm256_set1_epi64x(0xFFFFFFFF);
    const __m256i m0 = _mm256_set1_epi64x(0xD2511F53);
    const __m256i m1 = _mm256_set1_epi64x(0xCD9E8D57);
    __m256i c0[kVec], c1[kVec], c2[kVec], c3[kVec];
    for (int v = 0; v < kVec; ++v) {
      alignas(32) std::int64_t lo[4], hi[4];
      for (int j = 0; j < 4; ++j) {
        const std::uint64_t blk = block_ + static_cast<std::uint64_t>(4 * v + j);
        lo[j] = static_cast<std::int64_t>(blk & 0xFFFFFFFFu);
        hi[j] = static_cast<std::int64_t>(blk >> 32);
      }
      c0[v] = _mm256_load_si256(reinterpret_cast<const __m256i*>(lo));
      c1[v] = _mm256_load_si256(reinterpret_cast<const __m256i*>(hi));
      c2[v] = _mm256_set1_epi64x(stream_lo_);
      c3[v] = _mm256_set1_epi64x(stream_hi_);
    }
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      const __m256i vk0 = _mm256_set1_epi64x(k0);
      const __m256i vk1 = _mm256_set1_epi64x(k1);
      for (int v = 0; v < kVec; ++v) {
        const __m256i p0 = _mm256_mul_epu32(c0[v], m0);
        const __m256i p1 = _mm256_mul_epu32(c2[v], m1);
        c0[v] = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1[v]), vk0);
        c2[v] = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3[v]), vk1);
        c1[v] = _mm256_and_si256(p1, mask);
        c3[v] = _mm256_and_si256(p0, mask);
      }
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    for (int v = 0; v < kVec; ++v) {
      alignas(32) std::uint64_t w0[4], w1[4], w2[4], w3[4];
      _mm256_store_si256(reinterpret_cast<__m256i*>(w0), c0[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w1), c1[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w2), c2[v]);
      _mm256_store_si256(reinterpret_cast<__m256i*>(w3), c3[v]);
      for (int j = 0; j < 4; ++j) store(4 * v + j, w0[j], w1[j], w2[j], w3[j]);
    }
  }
#elif defined(__SSE2__)
  // Two blocks per register, one 32-bit word per 64-bit lane.
  void refill_sse2() noexcept {
    constexpr int kVec = kBlocks / 2;
    const __m128i mask = _mm_set1_epi64x(0xFFFFFFFF);
    const __m128i m0 = _mm_set1_epi64x(0xD2511F53);
    const __m128i m1 = _mm_set1_epi64x(0xCD9E8D57);
    __m128i c0[kVec], c1[kVec], c2[kVec], c3[kVec];
    for (int v = 0; v < kVec; ++v) {
      const std::uint64_t a = block_ + static_cast<std::uint64_t>(2 * v);
      const std::uint64_t b = a + 1;
      c0[v] = _mm_set_epi64x(static_cast<std::int64_t>(b & 0xFFFFFFFFu),
                             static_cast<std::int64_t>(a & 0xFFFFFFFFu));
      c1[v] = _mm_set_epi64x(static_cast<std::int64_t>(b >> 32), static_cast<std::int64_t>(a >> 32));
      c2[v] = _mm_set1_epi64x(stream_lo_);
      c3[v] = _mm_set1_epi64x(stream_hi_);
    }
    std::uint32_t k0 = key_[0];
    std::uint32_t k1 = key_[1];
    for (int r = 0; r < 10; ++r) {
      const __m128i vk0 = _mm_set1_epi64x(k0);
      const __m128i vk1 = _mm_set1_epi64x(k1);
      for (int v = 0; v < kVec; ++v) {
        const __m128i p0 = _mm_mul_epu32(c0[v], m0);
        const __m128i p1 = _mm_mul_epu32(c2[v], m1);
        c0[v] = _mm_xor_si128(_mm_xor_si128(_mm_srli_epi64(p1, 32), c1[v]), vk0);
        c2[v] = _mm_xor_si128(_mm_xor_si128(_mm_srli_epi64(p0, 32), c3[v]), vk1);
        c1[v] = _mm_and_si128(p1, mask);
        c3[v] = _mm_and_si128(p0, mask);
      }
      k0 += 0x9E3779B9u;
      k1 += 0xBB67AE85u;
    }
    for (int v = 0; v < kVec; ++v) {
      alignas(16) std::uint64_t w0[2], w1[2], w2[2], w3[2];
      _mm_store_si128(reinterpret_cast<__m128i*>(w0), c0[v]);
      _mm_store_si128(reinterpret_cast<__m128i*>(w1), c1[v]);
      _mm_store_si128(reinterpret_cast<__m128i*>(w2), c2[v]);
      _mm_store_si128(reinterpret_cast<__m128i*>(w3), c3[v]);
      for (int j = 0; j < 2; ++j) store(2 * v + j, w0[j], w1[j], w2[j], w3[j]);
    }
  }
#endif

  PhiloxKey key_;
  std::uint32_t stream_lo_;
  std::uint32_t stream_hi_;
  std::uint64_t block_ = 0;
  int pos_ = kBufferWords;
  std::array<std::uint64_t, kBufferWords> buffer_{};
};

// Ziggurat tables for the standard normal, 128 strips of equal area.
struct ZigguratTables {
  static constexpr int kStrips = 128;
  static constexpr double kTailStart = 3.442619855899;
  static constexpr double kStripArea = 9.91256303526217e-3;

  std::array<double, kStrips + 1> x{};
  std::array<double, kStrips> ratio{};  // x[i+1] / x[i]

  static const ZigguratTables& instance();
};

// Standard normal deviates from a counter-based stream (Doornik's ziggurat).
class NormalStream {
 public:
  NormalStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : bits_(seed, stream_id), zig_(&ZigguratTables::instance()) {}

  double next_normal() noexcept {
    for (;;) {
      const std::uint64_t w = bits_.next_u64();
      const auto i = static_cast<int>(w & 0x7F);
      const double u = (static_cast<double>(w >> 11) + 0.5) * 0x1.0p-52 - 1.0;
      if (std::fabs(u) < zig_->ratio[i]) return u * zig_->x[i];
      if (i == 0) return tail(u < 0.0);
      const double x = u * zig_->x[i];
      const double f0 = std::exp(-0.5 * (zig_->x[i] * zig_->x[i] - x * x));
      const double f1 = std::exp(-0.5 * (zig_->x[i + 1] * zig_->x[i + 1] - x * x));
      if (f1 + bits_.next_uniform() * (f0 - f1) < 1.0) return x;
    }
  }

  CounterStream& bits() noexcept { return bits_; }

 private:
  double tail(bool negative) noexcept {
    constexpr double r = ZigguratTables::kTailStart;
    double x = 0.0;
    double y = 0.0;
    do {
      x = std::log(bits_.next_uniform()) / r;
      y = std::log(bits_.next_uniform());
    } while (-2.0 * y < x * x);
    return negative ? x - r : r - x;
  }

  CounterStream bits_;
  const ZigguratTables* zig_;
};

}  // namespace spde_lrt
