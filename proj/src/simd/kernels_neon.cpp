//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

// NEON kernels (AArch64): vcnt per byte, widened with pairwise adds.

#include <arm_neon.h>

#include <bit>

#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::simd::detail {
namespace {

struct OpNone {
  static uint8x16_t vec(uint8x16_t a, uint8x16_t) { return a; }
  static std::uint64_t word(std::uint64_t a, std::uint64_t) { return a; }
};
struct OpAnd {
  static uint8x16_t vec(uint8x16_t a, uint8x16_t b) { return vandq_u8(a, b); }
  static std::uint64_t word(std::uint64_t a, std::uint64_t b) { return a & b; }
};
struct OpOr {
  static uint8x16_t vec(uint8x16_t a, uint8x16_t b) { return vorrq_u8(a, b); }
  static std::uint64_t word(std::uint64_t a, std::uint64_t b) { return a | b; }
};

template <typename Op>
std::uint64_t count(const std::uint64_t *a, const std::uint64_t *b,
                    std::size_t n) {
  uint64x2_t total = vdupq_n_u64(0);
  const uint8x16_t zero = vdupq_n_u8(0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const uint8x16_t va = vld1q_u8(reinterpret_cast<const std::uint8_t *>(a + i));
    const uint8x16_t vb =
        b ? vld1q_u8(reinterpret_cast<const std::uint8_t *>(b + i)) : zero;
    const uint8x16_t bytes = vcntq_u8(Op::vec(va, vb));
    total = vpadalq_u32(total, vpaddlq_u16(vpaddlq_u8(bytes)));
  }
  std::uint64_t result = vgetq_lane_u64(total, 0) + vgetq_lane_u64(total, 1);
  for (; i < n; ++i)
    result += static_cast<std::uint64_t>(
        std::popcount(Op::word(a[i], b ? b[i] : 0)));
  return result;
}

std::uint64_t popcount_neon(const std::uint64_t *w, std::size_t n) {
  return count<OpNone>(w, nullptr, n);
}
std::uint64_t and_popcount_neon(const std::uint64_t *a, const std::uint64_t *b,
                                std::size_t n) {
  return count<OpAnd>(a, b, n);
}
std::uint64_t or_popcount_neon(const std::uint64_t *a, const std::uint64_t *b,
                               std::size_t n) {
  return count<OpOr>(a, b, n);
}

constexpr Kernels kNeon {popcount_neon, and_popcount_neon, or_popcount_neon};

}  // namespace

const Kernels &neon_kernels() {
  return kNeon;
}

}  // namespace leakaudit::simd::detail
