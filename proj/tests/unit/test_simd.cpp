//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <bit>
#include <random>
#include <vector>

#include "leakaudit/simd/popcount.hpp"

namespace simd = leakaudit::simd;

namespace {

std::uint64_t naive(const std::vector<std::uint64_t> &w) {
  std::uint64_t n = 0;
  for (std::uint64_t x: w) {
    for (; x; x &= x - 1)
      ++n;
  }
  return n;
}

std::vector<std::uint64_t> random_words(std::mt19937_64 &rng, std::size_t n, int density) {
  std::vector<std::uint64_t> out(n);
  for (auto &w: out) {
    w = rng();
    // Thin out bits so sparse fingerprints are covered too.
    for (int d = 0; d < density; ++d)
      w &= rng();
  }
  return out;
}

// Restores the dispatcher after each test.
class SimdTest: public ::testing::Test {
protected:
  void SetUp() override { saved_ = simd::active_isa(); }
  void TearDown() override { simd::force_isa(saved_); }
  simd::Isa saved_ {};
};

}  // namespace

TEST_F(SimdTest, ScalarIsAlwaysAvailable) {
  const auto isas = simd::available_isas();
  ASSERT_FALSE(isas.empty());
  EXPECT_EQ(isas.front(), simd::Isa::kScalar);
  EXPECT_TRUE(simd::isa_available(simd::Isa::kScalar));
  EXPECT_EQ(simd::isa_name(simd::Isa::kScalar), "scalar");
}

TEST_F(SimdTest, UnavailableIsaIsRejected) {
  for (const simd::Isa isa: {simd::Isa::kAvx2, simd::Isa::kNeon}) {
    if (!simd::isa_available(isa)) {
      EXPECT_THROW(simd::kernels_for(isa), std::invalid_argument);
      EXPECT_THROW(simd::force_isa(isa), std::invalid_argument);
    }
  }
}

TEST_F(SimdTest, EveryVariantMatchesScalarAcrossLengths) {
  std::mt19937_64 rng(11);
  const simd::Kernels &ref = simd::kernels_for(simd::Isa::kScalar);
  for (const simd::Isa isa: simd::available_isas()) {
    const simd::Kernels &k = simd::kernels_for(isa);
    for (std::size_t n = 0; n <= 200; ++n) {
      for (const int density: {0, 2, 5}) {
        const auto a = random_words(rng, n, density);
        const auto b = random_words(rng, n, density);
        std::vector<std::uint64_t> both(n);
        std::vector<std::uint64_t> either(n);
        for (std::size_t i = 0; i < n; ++i) {
          both[i] = a[i] & b[i];
          either[i] = a[i] | b[i];
        }
        ASSERT_EQ(ref.popcount(a.data(), n), naive(a));
        ASSERT_EQ(k.popcount(a.data(), n), naive(a)) << simd::isa_name(isa) << " n=" << n;
        ASSERT_EQ(k.and_popcount(a.data(), b.data(), n), naive(both)) << simd::isa_name(isa);
        ASSERT_EQ(k.or_popcount(a.data(), b.data(), n), naive(either)) << simd::isa_name(isa);
      }
    }
  }
}

TEST_F(SimdTest, AllOnesAndUnalignedTails) {
  std::vector<std::uint64_t> ones(67, ~std::uint64_t {0});
  for (const simd::Isa isa: simd::available_isas()) {
    const simd::Kernels &k = simd::kernels_for(isa);
    for (std::size_t off = 0; off < 4; ++off) {
      const std::size_t n = ones.size() - off;
      EXPECT_EQ(k.popcount(ones.data() + off, n), 64 * n);
      EXPECT_EQ(k.and_popcount(ones.data() + off, ones.data(), n), 64 * n);
    }
  }
}

TEST_F(SimdTest, ForceIsaSwitchesDispatch) {
  const std::vector<std::uint64_t> w = {0xff, 0x1, 0x0, ~std::uint64_t {0}};
  for (const simd::Isa isa: simd::available_isas()) {
    simd::force_isa(isa);
    EXPECT_EQ(simd::active_isa(), isa);
    EXPECT_EQ(simd::popcount(w), 73u);
    EXPECT_EQ(simd::and_popcount(w, w), 73u);
    EXPECT_EQ(simd::or_popcount(w, w), 73u);
  }
}
