//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>
#include <string>

#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/sim/similarity.hpp"
#include "leakaudit/simd/popcount.hpp"
#include "oracles.hpp"

namespace fp = leakaudit::fp;
namespace sim = leakaudit::sim;
namespace simd = leakaudit::simd;
namespace lt = leakaudit::testing;

namespace {

fp::Fingerprint bits(int n, std::initializer_list<int> on) {
  const std::vector<int> v(on);
  return fp::Fingerprint::from_indices(n, v);
}

// Clustered random fingerprints: members of a cluster share a core, so
// both very similar and unrelated pairs occur.
std::vector<fp::Fingerprint> clustered(std::mt19937_64 &rng, int count, int n_bits) {
  std::uniform_int_distribution<int> bit(0, n_bits - 1);
  std::vector<std::vector<int>> cores(6);
  for (auto &c: cores) {
    for (int i = 0; i < 30; ++i)
      c.push_back(bit(rng));
  }
  std::vector<fp::Fingerprint> out;
  for (int i = 0; i < count; ++i) {
    std::vector<int> on = cores[static_cast<std::size_t>(i) % cores.size()];
    std::uniform_int_distribution<int> keep(0, 9);
    std::erase_if(on, [&](int) { return keep(rng) == 0; });
    const int extra = static_cast<int>(rng() % 12);
    for (int e = 0; e < extra; ++e)
      on.push_back(bit(rng));
    if (i % 17 == 0)
      on.clear();
    out.push_back(fp::Fingerprint::from_indices(n_bits, on));
  }
  return out;
}

std::vector<std::string> ids(std::size_t n, const std::string &prefix) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s%04zu", prefix.c_str(), i);
    out.emplace_back(buf);
  }
  return out;
}

std::vector<sim::FingerprintRef> refs(const std::vector<fp::Fingerprint> &f,
                                      const std::vector<std::string> &id) {
  std::vector<sim::FingerprintRef> out;
  for (std::size_t i = 0; i < f.size(); ++i)
    out.push_back({id[i], &f[i]});
  return out;
}

using Triple = std::tuple<std::size_t, std::size_t, double>;

std::set<Triple> as_set(const std::vector<sim::SimilarityPair> &pairs) {
  std::set<Triple> out;
  for (const auto &p: pairs)
    out.emplace(p.index_a, p.index_b, p.tc);
  return out;
}

}  // namespace

TEST(Tanimoto, Examples) {
  EXPECT_DOUBLE_EQ(sim::tanimoto(bits(64, {1, 2, 3}), bits(64, {2, 3, 4})), 0.5);
  EXPECT_DOUBLE_EQ(sim::tanimoto(bits(64, {1}), bits(64, {1})), 1.0);
  EXPECT_DOUBLE_EQ(sim::tanimoto(bits(64, {1}), bits(64, {2})), 0.0);
  EXPECT_DOUBLE_EQ(sim::tanimoto(bits(64, {}), bits(64, {})), 0.0);
  EXPECT_THROW(sim::tanimoto(bits(64, {1}), bits(128, {1})), fp::MismatchedParams);
  const auto a = fp::ecfp(leakaudit::chem::parse_smiles("CCO"));
  EXPECT_DOUBLE_EQ(sim::tanimoto(a, a), 1.0);
}

TEST(Tanimoto, MatchesBitwiseOracleOnEveryIsa) {
  std::mt19937_64 rng(21);
  const auto f = clustered(rng, 60, 2048);
  const simd::Isa saved = simd::active_isa();
  for (const simd::Isa isa: simd::available_isas()) {
    simd::force_isa(isa);
    for (std::size_t i = 0; i < f.size(); ++i) {
      for (std::size_t j = 0; j < f.size(); ++j)
        ASSERT_DOUBLE_EQ(sim::tanimoto(f[i], f[j]), lt::brute_tanimoto(f[i], f[j]));
    }
  }
  simd::force_isa(saved);
}

TEST(PopcountWindow, ContainsEveryQualifyingPartner) {
  for (const double t: {0.3, 0.6, 0.85, 1.0}) {
    for (int p = 0; p <= 80; ++p) {
      const auto w = sim::popcount_window(p, t);
      // Every (q, c) combination that reaches t must have q inside the window.
      for (int q = 0; q <= 160; ++q) {
        for (int c = 0; c <= std::min(p, q); ++c) {
          if (sim::tanimoto_from_counts(c, p, q) >= t && (p + q - c) > 0)
            ASSERT_TRUE(q >= w.lo && q <= w.hi) << "p=" << p << " q=" << q << " t=" << t;
        }
      }
    }
  }
}

TEST(Search, CrossPairsMatchBruteForce) {
  std::mt19937_64 rng(31);
  const auto a = clustered(rng, 90, 1024);
  const auto b = clustered(rng, 70, 1024);
  const auto ia = ids(a.size(), "a");
  const auto ib = ids(b.size(), "b");
  const auto ra = refs(a, ia);
  const auto rb = refs(b, ib);
  for (const double t: {0.2, 0.45, 0.6, 0.85, 1.0}) {
    const auto got = sim::find_cross_pairs(ra, rb, {t, 1});
    std::set<Triple> expect;
    for (const auto &p: lt::brute_pairs(a, b, t))
      expect.insert(p);
    ASSERT_EQ(as_set(got), expect) << "t=" << t;
    ASSERT_EQ(got.size(), expect.size());
    for (std::size_t i = 1; i < got.size(); ++i) {
      const auto &x = got[i - 1];
      const auto &y = got[i];
      ASSERT_TRUE(x.tc > y.tc || (x.tc == y.tc && std::tie(x.id_a, x.id_b) < std::tie(y.id_a, y.id_b)));
    }
  }
}

TEST(Search, SelfPairsMatchBruteForce) {
  std::mt19937_64 rng(41);
  const auto f = clustered(rng, 120, 1024);
  const auto id = ids(f.size(), "m");
  const auto r = refs(f, id);
  for (const double t: {0.3, 0.6, 0.9}) {
    const auto got = sim::find_self_pairs(r, {t, 1});
    std::set<Triple> expect;
    for (const auto &p: lt::brute_self_pairs(f, t))
      expect.insert(p);
    ASSERT_EQ(as_set(got), expect);
    for (const auto &p: got)
      ASSERT_LT(p.id_a, p.id_b);
  }
}

TEST(Search, ResultIsIndependentOfThreadCount) {
  std::mt19937_64 rng(51);
  const auto a = clustered(rng, 150, 2048);
  const auto b = clustered(rng, 130, 2048);
  const auto ia = ids(a.size(), "a");
  const auto ib = ids(b.size(), "b");
  const auto ra = refs(a, ia);
  const auto rb = refs(b, ib);
  const auto base = sim::find_cross_pairs(ra, rb, {0.4, 1});
  const auto base_self = sim::find_self_pairs(ra, {0.4, 1});
  for (const int threads: {2, 3, 8}) {
    EXPECT_EQ(sim::find_cross_pairs(ra, rb, {0.4, threads}), base);
    EXPECT_EQ(sim::find_self_pairs(ra, {0.4, threads}), base_self);
  }
}

TEST(Search, EmptyInputs) {
  const std::vector<sim::FingerprintRef> none;
  const auto f = bits(64, {1});
  const std::vector<sim::FingerprintRef> one = {{"x", &f}};
  EXPECT_TRUE(sim::find_cross_pairs(none, one, {}).empty());
  EXPECT_TRUE(sim::find_self_pairs(one, {}).empty());
}
