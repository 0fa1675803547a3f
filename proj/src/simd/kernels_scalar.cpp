//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

// Reference kernels. Every vector variant must agree with these exactly.

#include <bit>

#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::simd::detail {
namespace {

std::uint64_t popcount_scalar(const std::uint64_t *w, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    total += static_cast<std::uint64_t>(std::popcount(w[i]));
  return total;
}

std::uint64_t and_popcount_scalar(const std::uint64_t *a,
                                  const std::uint64_t *b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    total += static_cast<std::uint64_t>(std::popcount(a[i] & b[i]));
  return total;
}

std::uint64_t or_popcount_scalar(const std::uint64_t *a,
                                 const std::uint64_t *b, std::size_t n) {
  std::uint64_t total = 0;
  for (std::size_t i = 0; i < n; ++i)
    total += static_cast<std::uint64_t>(std::popcount(a[i] | b[i]));
  return total;
}

constexpr Kernels kScalar {popcount_scalar, and_popcount_scalar,
                           or_popcount_scalar};

}  // namespace

const Kernels &scalar_kernels() {
  return kScalar;
}

}  // namespace leakaudit::simd::detail
