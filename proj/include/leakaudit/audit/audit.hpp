//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "leakaudit/data/dataset.hpp"

namespace leakaudit::audit {

enum class Category {
  kInterIdentity,
  kInterAnalog,
  kIntraIdentity,
  kIntraAnalog,
};

inline constexpr std::array<Category, 4> kAllCategories = {
    Category::kInterIdentity, Category::kInterAnalog, Category::kIntraIdentity,
    Category::kIntraAnalog};

std::string_view category_name(Category c);

using data::SplitRole;
using RolePair = std::pair<SplitRole, SplitRole>;

/// "train_active|val_active"; a single role for intra categories.
std::string role_pair_label(SplitRole a, SplitRole b);

/// Which role comparisons run. The defaults are the comparisons listed in
/// the published audit; everything else is opt-in.
struct RolePolicy {
  /// train_active x val_active, identity and analog.
  bool active_vs_active = true;
  /// train_inactive x val_inactive identity.
  bool inactive_vs_inactive = true;
  /// query x train_inactive and query x val_inactive identity.
  bool query_vs_all = false;
  /// Actives against inactives (label conflicts), identity only.
  bool cross_label = false;
  /// query x train_active and query x val_active analogs.
  bool analog_query = false;
  /// train_inactive x val_inactive analogs.
  bool analog_inactives = false;
  /// Intra-set analogs within train and val actives (query is always on).
  bool intra_analog_actives = false;
  /// Intra-set analogs within train and val inactives.
  bool intra_analog_inactives = false;
};

struct AuditConfig {
  double tc_inter = 0.6;
  double tc_intra = 0.85;
  double mcs_intra = 0.9;
  /// MCS runs only on pairs with tc >= tc_intra - prefilter_margin.
  bool mcs_prefilter = true;
  double prefilter_margin = 0.25;
  std::uint64_t mcs_budget = 1'000'000;
  RolePolicy roles;
  int threads = 1;

  /// Throws std::invalid_argument on thresholds outside (0, 1].
  void validate() const;
};

std::vector<RolePair> inter_identity_pairs(const AuditConfig &config);
std::vector<RolePair> inter_analog_pairs(const AuditConfig &config);
std::vector<SplitRole> intra_analog_roles(const AuditConfig &config);

struct LeakFinding {
  Category category = Category::kInterIdentity;
  std::string target;
  SplitRole role_a = SplitRole::kQuery;
  SplitRole role_b = SplitRole::kQuery;
  /// Every record id carrying the canonical string on each side. Intra
  /// identity findings list the whole duplicate group in ids_a.
  std::vector<std::string> ids_a;
  std::vector<std::string> ids_b;
  std::string canonical_a;
  std::string canonical_b;
  std::optional<double> tc;
  std::optional<double> mcs_ratio;
  /// False when the MCS search hit its budget (ratio is a lower bound).
  std::optional<bool> mcs_exact;
};

std::vector<LeakFinding> detect_inter_identity(const data::TargetDataset &target,
                                               const AuditConfig &config = {});
std::vector<LeakFinding> detect_inter_analog(const data::TargetDataset &target,
                                             const AuditConfig &config = {});
std::vector<LeakFinding> detect_intra_identity(const data::TargetDataset &target);
struct McsStats {
  std::size_t evaluated = 0;
  std::size_t truncated = 0;
};

std::vector<LeakFinding> detect_intra_analog(const data::TargetDataset &target,
                                             const AuditConfig &config = {},
                                             McsStats *stats = nullptr);

/// Counts keyed by category then role-pair label.
using CountTable = std::map<Category, std::map<std::string, std::size_t>>;

struct TargetAudit {
  std::string name;
  std::vector<LeakFinding> findings;
  CountTable counts;
  std::array<std::size_t, 5> parse_failures {};
  std::array<std::size_t, 5> records {};
  std::array<std::size_t, 5> unique {};
  std::size_t mcs_evaluated = 0;
  std::size_t mcs_truncated = 0;
};

struct AuditSummary {
  std::vector<TargetAudit> targets;
  CountTable totals;
  /// Identity categories only: distinct canonical strings per cell across
  /// all targets (a string shared in two targets counts once).
  CountTable global_unique;
  std::size_t parse_failures = 0;
  std::size_t mcs_truncated = 0;
  AuditConfig config;
  fp::FingerprintParams params;
  std::vector<std::string> warnings;

  std::size_t finding_count() const;
};

AuditSummary summarize(const data::Benchmark &benchmark,
                       const AuditConfig &config = {});

/// Machine-readable report (JSON, schema_version 1). `run_config_json`, a
/// JSON object, is embedded as "run_config" when non-empty.
std::string report_json(const AuditSummary &summary,
                        const data::Benchmark &benchmark,
                        const std::string &run_config_json = {});

/// Plain-text table, one row per category and role pair.
std::string report_table(const AuditSummary &summary);

}  // namespace leakaudit::audit
