//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

// AVX2 kernels: nibble-lookup popcount (vpshufb) with byte counters
// flushed through vpsadbw. This translation unit is built with -mavx2 and
// must only be entered after the runtime CPU check in dispatch.cpp.

#include <immintrin.h>

#include <algorithm>

#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::simd::detail {
namespace {

inline __m256i popcount_bytes(__m256i v) {
  const __m256i lookup =
      _mm256_setr_epi8(0, 1, 1, 2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4, 0, 1, 1,
                       2, 1, 2, 2, 3, 1, 2, 2, 3, 2, 3, 3, 4);
  const __m256i low_mask = _mm256_set1_epi8(0x0f);
  const __m256i lo = _mm256_and_si256(v, low_mask);
  const __m256i hi = _mm256_and_si256(_mm256_srli_epi16(v, 4), low_mask);
  return _mm256_add_epi8(_mm256_shuffle_epi8(lookup, lo),
                         _mm256_shuffle_epi8(lookup, hi));
}

inline std::uint64_t hsum_epi64(__m256i v) {
  const __m128i lo = _mm256_castsi256_si128(v);
  const __m128i hi = _mm256_extracti128_si256(v, 1);
  const __m128i s = _mm_add_epi64(lo, hi);
  return static_cast<std::uint64_t>(_mm_cvtsi128_si64(s)) +
         static_cast<std::uint64_t>(_mm_extract_epi64(s, 1));
}

struct OpNone {
  static __m256i vec(__m256i a, __m256i) { return a; }
  static std::uint64_t word(std::uint64_t a, std::uint64_t) { return a; }
};
struct OpAnd {
  static __m256i vec(__m256i a, __m256i b) { return _mm256_and_si256(a, b); }
  static std::uint64_t word(std::uint64_t a, std::uint64_t b) { return a & b; }
};
struct OpOr {
  static __m256i vec(__m256i a, __m256i b) { return _mm256_or_si256(a, b); }
  static std::uint64_t word(std::uint64_t a, std::uint64_t b) { return a | b; }
};

// Byte lanes hold at most 8 per block, so eight blocks fit before a flush.
constexpr std::size_t kFlushBlocks = 8;

template <typename Op>
std::uint64_t count(const std::uint64_t *a, const std::uint64_t *b,
                    std::size_t n) {
  const __m256i zero = _mm256_setzero_si256();
  __m256i total = zero;
  std::size_t i = 0;
  const std::size_t blocks = n / 4;
  std::size_t done = 0;
  while (done < blocks) {
    const std::size_t run = std::min(kFlushBlocks, blocks - done);
    __m256i bytes = zero;
    for (std::size_t k = 0; k < run; ++k, i += 4) {
      const __m256i va =
          _mm256_loadu_si256(reinterpret_cast<const __m256i *>(a + i));
      const __m256i vb =
          b ? _mm256_loadu_si256(reinterpret_cast<const __m256i *>(b + i))
            : zero;
      bytes = _mm256_add_epi8(bytes, popcount_bytes(Op::vec(va, vb)));
    }
    total = _mm256_add_epi64(total, _mm256_sad_epu8(bytes, zero));
    done += run;
  }
  std::uint64_t result = hsum_epi64(total);
  for (; i < n; ++i)
    result += static_cast<std::uint64_t>(
        _mm_popcnt_u64(Op::word(a[i], b ? b[i] : 0)));
  return result;
}

std::uint64_t popcount_avx2(const std::uint64_t *w, std::size_t n) {
  return count<OpNone>(w, nullptr, n);
}

std::uint64_t and_popcount_avx2(const std::uint64_t *a, const std::uint64_t *b,
                                std::size_t n) {
  return count<OpAnd>(a, b, n);
}

std::uint64_t or_popcount_avx2(const std::uint64_t *a, const std::uint64_t *b,
                               std::size_t n) {
  return count<OpOr>(a, b, n);
}

constexpr Kernels kAvx2 {popcount_avx2, and_popcount_avx2, or_popcount_avx2};

}  // namespace

const Kernels &avx2_kernels() {
  return kAvx2;
}

}  // namespace leakaudit::simd::detail
