//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "leakaudit/fp/fingerprint.hpp"

namespace leakaudit::sim {

/// |a AND b| / |a OR b|. Two empty fingerprints score 0.0, so featureless
/// molecules are never reported as analogs. Throws fp::MismatchedParams
/// when the widths differ.
double tanimoto(const fp::Fingerprint &a, const fp::Fingerprint &b);

/// Exact Tanimoto from counts, shared by the search and its callers so
/// that every threshold comparison sees the same double.
inline double tanimoto_from_counts(int common, int pop_a, int pop_b) {
  const int uni = pop_a + pop_b - common;
  return uni == 0 ? 0.0 : static_cast<double>(common) / uni;
}

/// Identified fingerprint, borrowed from the caller.
struct FingerprintRef {
  std::string_view id;
  const fp::Fingerprint *fingerprint;
};

struct SimilarityPair {
  std::size_t index_a = 0;  ///< index into the first (or only) input set
  std::size_t index_b = 0;  ///< index into the second (or same) input set
  std::string id_a;
  std::string id_b;
  double tc = 0.0;
  std::optional<double> mcs_ratio;

  friend bool operator==(const SimilarityPair &, const SimilarityPair &) = default;
};

struct SearchOptions {
  double threshold = 0.6;
  int threads = 1;
};

/// All (x in A, y in B) with tanimoto(x, y) >= threshold, ordered by
/// (tc descending, id_a, id_b). Candidates are pruned with the popcount
/// bound t*p <= q <= p/t before any AND is computed.
std::vector<SimilarityPair> find_cross_pairs(std::span<const FingerprintRef> a,
                                             std::span<const FingerprintRef> b,
                                             const SearchOptions &options);

/// Unordered pairs within one set, self-pairs excluded, oriented so that
/// id_a < id_b. Same ordering contract as find_cross_pairs.
std::vector<SimilarityPair> find_self_pairs(std::span<const FingerprintRef> set,
                                            const SearchOptions &options);

/// Popcount window [lo, hi] outside of which no partner of a fingerprint
/// with `pop` set bits can reach `threshold`. Widened by one on each side
/// so floating-point rounding can never prune a qualifying pair.
struct PopcountWindow {
  int lo;
  int hi;
};
PopcountWindow popcount_window(int pop, double threshold);

}  // namespace leakaudit::sim
