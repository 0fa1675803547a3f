//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace leakaudit::simd {

/// Instruction-set variants of the bit-counting kernels.
enum class Isa {
  kScalar,
  kAvx2,
  kNeon,
};

std::string_view isa_name(Isa isa);

/// Word-wise bit counting over equal-length arrays of 64-bit words.
struct Kernels {
  std::uint64_t (*popcount)(const std::uint64_t *words, std::size_t n);
  std::uint64_t (*and_popcount)(const std::uint64_t *a, const std::uint64_t *b,
                                std::size_t n);
  std::uint64_t (*or_popcount)(const std::uint64_t *a, const std::uint64_t *b,
                               std::size_t n);
};

/// Whether this build and this CPU can run the given variant.
bool isa_available(Isa isa);

/// Every variant runnable here, scalar first.
std::vector<Isa> available_isas();

/// Kernel table for a variant; throws std::invalid_argument when the
/// variant is not available.
const Kernels &kernels_for(Isa isa);

/// The variant used by the dispatching entry points below. Chosen once at
/// first use (widest available) unless overridden with force_isa.
Isa active_isa();
void force_isa(Isa isa);

const Kernels &active_kernels();

inline std::uint64_t popcount(std::span<const std::uint64_t> words) {
  return active_kernels().popcount(words.data(), words.size());
}

/// |a AND b|; the spans must have equal length.
inline std::uint64_t and_popcount(std::span<const std::uint64_t> a,
                                  std::span<const std::uint64_t> b) {
  return active_kernels().and_popcount(a.data(), b.data(), a.size());
}

inline std::uint64_t or_popcount(std::span<const std::uint64_t> a,
                                 std::span<const std::uint64_t> b) {
  return active_kernels().or_popcount(a.data(), b.data(), a.size());
}

namespace detail {
const Kernels &scalar_kernels();
#if defined(LEAKAUDIT_HAVE_AVX2)
const Kernels &avx2_kernels();
#endif
#if defined(LEAKAUDIT_HAVE_NEON)
const Kernels &neon_kernels();
#endif
}  // namespace detail

}  // namespace leakaudit::simd
