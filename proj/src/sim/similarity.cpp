//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/sim/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "leakaudit/parallel.hpp"
#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::sim {
namespace {

void check_threshold(double t) {
  if (!(t > 0.0 && t <= 1.0))
    throw std::invalid_argument("similarity threshold must be in (0, 1]");
}

// Fingerprints copied into one contiguous popcount-sorted word matrix.
struct SortedBlock {
  std::size_t words_per_row = 0;
  std::vector<std::uint64_t> words;
  std::vector<int> pop;
  std::vector<std::size_t> original;  // sorted row -> input index

  std::span<const std::uint64_t> row(std::size_t r) const {
    return {words.data() + r * words_per_row, words_per_row};
  }
};

SortedBlock build_block(std::span<const FingerprintRef> set, int n_bits) {
  SortedBlock block;
  block.original.resize(set.size());
  std::iota(block.original.begin(), block.original.end(), std::size_t {0});
  std::ranges::stable_sort(block.original, {}, [&](std::size_t i) {
    return set[i].fingerprint->popcount();
  });
  block.words_per_row = set.empty() ? 0 : set.front().fingerprint->words().size();
  block.words.reserve(block.words_per_row * set.size());
  block.pop.reserve(set.size());
  for (const std::size_t i: block.original) {
    const fp::Fingerprint &f = *set[i].fingerprint;
    if (f.n_bits() != n_bits)
      throw fp::MismatchedParams("fingerprint widths differ within a search");
    block.words.insert(block.words.end(), f.words().begin(), f.words().end());
    block.pop.push_back(f.popcount());
  }
  return block;
}

void sort_pairs(std::vector<SimilarityPair> &pairs) {
  std::ranges::sort(pairs, [](const SimilarityPair &x, const SimilarityPair &y) {
    if (x.tc != y.tc)
      return x.tc > y.tc;
    if (x.id_a != y.id_a)
      return x.id_a < y.id_a;
    if (x.id_b != y.id_b)
      return x.id_b < y.id_b;
    if (x.index_a != y.index_a)
      return x.index_a < y.index_a;
    return x.index_b < y.index_b;
  });
}

int common_width(std::span<const FingerprintRef> a,
                 std::span<const FingerprintRef> b) {
  const int width = !a.empty() ? a.front().fingerprint->n_bits()
                               : b.front().fingerprint->n_bits();
  return width;
}

}  // namespace

double tanimoto(const fp::Fingerprint &a, const fp::Fingerprint &b) {
  if (a.n_bits() != b.n_bits())
    throw fp::MismatchedParams("cannot compare fingerprints of " +
                               std::to_string(a.n_bits()) + " and " +
                               std::to_string(b.n_bits()) + " bits");
  const auto common = static_cast<int>(simd::and_popcount(a.words(), b.words()));
  return tanimoto_from_counts(common, a.popcount(), b.popcount());
}

PopcountWindow popcount_window(int pop, double threshold) {
  const double lo = std::ceil(threshold * pop) - 1.0;
  const double hi = std::floor(pop / threshold) + 1.0;
  return {static_cast<int>(std::max(0.0, lo)),
          static_cast<int>(std::min(hi, 1e9))};
}

std::vector<SimilarityPair> find_cross_pairs(std::span<const FingerprintRef> a,
                                             std::span<const FingerprintRef> b,
                                             const SearchOptions &options) {
  check_threshold(options.threshold);
  if (a.empty() || b.empty())
    return {};
  const int width = common_width(a, b);
  const SortedBlock block = build_block(b, width);
  for (const FingerprintRef &r: a) {
    if (r.fingerprint->n_bits() != width)
      throw fp::MismatchedParams("fingerprint widths differ between sets");
  }

  const std::size_t shards = shard_count(a.size(), options.threads);
  std::vector<std::vector<SimilarityPair>> found(shards);
  const simd::Kernels &k = simd::active_kernels();
  parallel_shards(a.size(), options.threads,
                  [&](std::size_t shard, std::size_t begin, std::size_t end) {
    auto &out = found[shard];
    for (std::size_t i = begin; i < end; ++i) {
      const fp::Fingerprint &fa = *a[i].fingerprint;
      const int pa = fa.popcount();
      if (pa == 0)
        continue;
      const auto [lo, hi] = popcount_window(pa, options.threshold);
      auto first = std::ranges::lower_bound(block.pop, lo);
      for (auto it = first; it != block.pop.end() && *it <= hi; ++it) {
        const auto r = static_cast<std::size_t>(it - block.pop.begin());
        const auto row = block.row(r);
        const auto common = static_cast<int>(
            k.and_popcount(fa.words().data(), row.data(), row.size()));
        const double tc = tanimoto_from_counts(common, pa, *it);
        if (tc >= options.threshold) {
          const std::size_t j = block.original[r];
          out.push_back({i, j, std::string(a[i].id), std::string(b[j].id), tc,
                         std::nullopt});
        }
      }
    }
  });

  std::vector<SimilarityPair> pairs;
  for (auto &part: found)
    pairs.insert(pairs.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  sort_pairs(pairs);
  return pairs;
}

std::vector<SimilarityPair> find_self_pairs(std::span<const FingerprintRef> set,
                                            const SearchOptions &options) {
  check_threshold(options.threshold);
  if (set.size() < 2)
    return {};
  const int width = set.front().fingerprint->n_bits();
  const SortedBlock block = build_block(set, width);
  const std::size_t n = set.size();

  const std::size_t shards = shard_count(n, options.threads);
  std::vector<std::vector<SimilarityPair>> found(shards);
  const simd::Kernels &k = simd::active_kernels();
  parallel_shards(n, options.threads,
                  [&](std::size_t shard, std::size_t begin, std::size_t end) {
    auto &out = found[shard];
    for (std::size_t r = begin; r < end; ++r) {
      const int pr = block.pop[r];
      if (pr == 0)
        continue;
      // Rows are popcount-sorted, so every later row already satisfies
      // the lower bound; only the upper bound needs checking.
      const int hi = popcount_window(pr, options.threshold).hi;
      const auto row_r = block.row(r);
      for (std::size_t s = r + 1; s < n && block.pop[s] <= hi; ++s) {
        const auto row_s = block.row(s);
        const auto common = static_cast<int>(
            k.and_popcount(row_r.data(), row_s.data(), row_r.size()));
        const double tc = tanimoto_from_counts(common, pr, block.pop[s]);
        if (tc < options.threshold)
          continue;
        std::size_t i = block.original[r];
        std::size_t j = block.original[s];
        if (set[j].id < set[i].id || (set[j].id == set[i].id && j < i))
          std::swap(i, j);
        out.push_back({i, j, std::string(set[i].id), std::string(set[j].id), tc,
                       std::nullopt});
      }
    }
  });

  std::vector<SimilarityPair> pairs;
  for (auto &part: found)
    pairs.insert(pairs.end(), std::make_move_iterator(part.begin()),
                 std::make_move_iterator(part.end()));
  sort_pairs(pairs);
  return pairs;
}

}  // namespace leakaudit::sim
