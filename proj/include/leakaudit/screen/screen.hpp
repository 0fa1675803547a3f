//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "leakaudit/data/dataset.hpp"

namespace leakaudit::screen {

enum class Provenance {
  kExactActive,
  kExactInactive,
  kSimilarity,
  /// The molecule could not be parsed; score is -infinity.
  kUnparsed,
};

std::string_view provenance_name(Provenance p);

inline constexpr double kActiveScore = 2.0;
inline constexpr double kInactiveScore = -1.0;

struct BaselineScore {
  double value = 0.0;
  Provenance provenance = Provenance::kSimilarity;
  std::optional<double> max_tc_actives;
  std::optional<double> max_tc_queries;
  /// A comparison group was empty and contributed 0.0 to the average.
  bool empty_group = false;
};

/// Memorization baseline: exact training actives score 2.0, exact training
/// inactives -1.0, everything else the mean of its best Tanimoto to the
/// training actives and to the query ligands.
class BaselineScorer {
public:
  BaselineScorer(const data::RoleSet &train_actives,
                 const data::RoleSet &train_inactives,
                 const data::RoleSet &queries);

  BaselineScore score(const data::MoleculeRecord &mol) const;

  /// Canonical strings present in both training roles (actives win).
  const std::vector<std::string> &label_conflicts() const { return conflicts_; }

private:
  static double max_tc(const fp::Fingerprint &f,
                       const std::vector<const fp::Fingerprint *> &group);

  std::unordered_set<std::string> actives_;
  std::unordered_set<std::string> inactives_;
  std::vector<const fp::Fingerprint *> active_fps_;
  std::vector<const fp::Fingerprint *> query_fps_;
  std::vector<std::string> conflicts_;
};

BaselineScore baseline_score(const data::MoleculeRecord &mol,
                             const data::RoleSet &train_actives,
                             const data::RoleSet &train_inactives,
                             const data::RoleSet &queries);

struct RankEntry {
  std::string record_id;
  double score = 0.0;
  bool active = false;
  Provenance provenance = Provenance::kSimilarity;
};

/// Entries sorted by score descending (ties by record id, then label), so
/// equal scores form contiguous tie groups.
struct Ranking {
  std::vector<RankEntry> entries;
  std::size_t n = 0;
  std::size_t actives = 0;
  /// Entries whose score used an empty comparison group.
  std::size_t empty_group_entries = 0;
};

/// Sorts arbitrary entries into a Ranking.
Ranking make_ranking(std::vector<RankEntry> entries);

/// Scores every validation record (actives and inactives, duplicates and
/// parse failures included) of a target.
Ranking rank_validation(const data::TargetDataset &target, int threads = 1);

class DegenerateInput: public std::domain_error {
public:
  using std::domain_error::domain_error;
};

enum class TieMode {
  /// Tied actives straddling the cutoff contribute proportionally.
  kExpected,
  kOptimistic,
  kPessimistic,
};

std::string_view tie_mode_name(TieMode m);
std::optional<TieMode> tie_mode_from_name(std::string_view name);

struct EnrichmentResult {
  double fraction = 0.0;
  std::size_t k = 0;
  double hits = 0.0;
  double ef = 0.0;
  TieMode tie_mode = TieMode::kExpected;
};

/// k = floor(f * N). Throws std::invalid_argument unless 0 < f < 1 and
/// DegenerateInput when k = 0 or there are no actives.
std::size_t top_k(double fraction, std::size_t n);

EnrichmentResult enrichment_factor(const Ranking &ranking, double fraction,
                                   TieMode mode = TieMode::kExpected);

/// Expected-mode hits in the top k of unsorted scores, O(N). `scratch` is
/// reused between calls to avoid allocation.
double expected_top_k_hits(std::span<const double> scores,
                           std::span<const std::uint8_t> active, std::size_t k,
                           std::vector<double> &scratch);

/// Probability that a random active outranks a random inactive, ties
/// counted half. Throws DegenerateInput without both labels.
double auroc(const Ranking &ranking);

struct InflationParams {
  std::int64_t n = 0;
  std::int64_t a = 0;
  std::int64_t k = 0;
  /// Actives guaranteed to land in the top k (leaked exact matches).
  std::int64_t g = 0;

  /// Throws std::invalid_argument unless 0 <= g <= min(a, k) <= n, k >= 1
  /// and a >= 1.
  void validate() const;
};

/// [g + (A - g)(k - g)/(N - g)] / (k A / N)
double analytic_inflated_ef(const InflationParams &p);

struct SimulationResult {
  std::size_t trials = 0;
  double mean = 0.0;
  double stddev = 0.0;
  double stderr_mean = 0.0;
  /// mean -/+ 1.96 standard errors
  double ci_low = 0.0;
  double ci_high = 0.0;
};

/// Monte Carlo for the leak model: the g leaked actives score 2.0, every
/// other molecule draws a uniform random score in [0, 1). EF is computed
/// in expected tie mode. Deterministic for a given seed.
SimulationResult simulate_leak_ef(const InflationParams &p, std::size_t trials,
                                  std::uint64_t seed);

/// "record_id\tscore\tprovenance\tlabel" lines with a header.
std::string scores_tsv(const Ranking &ranking);

/// Reads the format written by scores_tsv (provenance column optional).
Ranking read_scores_tsv(std::string_view text);

}  // namespace leakaudit::screen
