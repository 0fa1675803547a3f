//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/audit/audit.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/parallel.hpp"
#include "leakaudit/sim/mcs.hpp"
#include "leakaudit/sim/similarity.hpp"

namespace leakaudit::audit {
namespace {

using data::RoleSet;

constexpr SplitRole kQ = SplitRole::kQuery;
constexpr SplitRole kTA = SplitRole::kTrainActive;
constexpr SplitRole kTI = SplitRole::kTrainInactive;
constexpr SplitRole kVA = SplitRole::kValActive;
constexpr SplitRole kVI = SplitRole::kValInactive;

void check_unit(double value, const char *name) {
  if (!(value > 0.0 && value <= 1.0))
    throw std::invalid_argument(std::string(name) + " must be in (0, 1]");
}

std::vector<sim::FingerprintRef> representatives(const RoleSet &set) {
  std::vector<sim::FingerprintRef> refs;
  refs.reserve(set.unique_count());
  for (std::size_t u = 0; u < set.unique_count(); ++u) {
    const data::MoleculeRecord &r = set.representative(u);
    refs.push_back({r.record_id, &*r.fingerprint});
  }
  return refs;
}

const std::vector<std::string> &ids_of(const RoleSet &set, const std::string &canonical) {
  return set.dedup_map.at(canonical);
}

bool finding_before(const LeakFinding &x, const LeakFinding &y) {
  const double tx = x.tc.value_or(0.0);
  const double ty = y.tc.value_or(0.0);
  if (tx != ty)
    return tx > ty;
  if (x.canonical_a != y.canonical_a)
    return x.canonical_a < y.canonical_a;
  return x.canonical_b < y.canonical_b;
}

struct Candidate {
  std::size_t i;
  std::size_t j;
  double tc;
};

}  // namespace

std::string_view category_name(Category c) {
  switch (c) {
  case Category::kInterIdentity:
    return "inter_identity";
  case Category::kInterAnalog:
    return "inter_analog";
  case Category::kIntraIdentity:
    return "intra_identity";
  case Category::kIntraAnalog:
    return "intra_analog";
  }
  return "unknown";
}

std::string role_pair_label(SplitRole a, SplitRole b) {
  if (a == b)
    return std::string(data::role_name(a));
  return std::string(data::role_name(a)) + "|" + std::string(data::role_name(b));
}

void AuditConfig::validate() const {
  check_unit(tc_inter, "tc_inter");
  check_unit(tc_intra, "tc_intra");
  check_unit(mcs_intra, "mcs_intra");
  if (prefilter_margin < 0.0)
    throw std::invalid_argument("prefilter_margin must be non-negative");
  if (mcs_budget == 0)
    throw std::invalid_argument("mcs_budget must be positive");
}

std::vector<RolePair> inter_identity_pairs(const AuditConfig &config) {
  std::vector<RolePair> pairs = {{kQ, kTA}, {kQ, kVA}};
  if (config.roles.query_vs_all) {
    pairs.emplace_back(kQ, kTI);
    pairs.emplace_back(kQ, kVI);
  }
  if (config.roles.inactive_vs_inactive)
    pairs.emplace_back(kTI, kVI);
  if (config.roles.active_vs_active)
    pairs.emplace_back(kTA, kVA);
  if (config.roles.cross_label) {
    pairs.emplace_back(kTA, kTI);
    pairs.emplace_back(kVA, kVI);
    pairs.emplace_back(kTA, kVI);
    pairs.emplace_back(kTI, kVA);
  }
  return pairs;
}

std::vector<RolePair> inter_analog_pairs(const AuditConfig &config) {
  std::vector<RolePair> pairs;
  if (config.roles.analog_query) {
    pairs.emplace_back(kQ, kTA);
    pairs.emplace_back(kQ, kVA);
  }
  if (config.roles.analog_inactives)
    pairs.emplace_back(kTI, kVI);
  if (config.roles.active_vs_active)
    pairs.emplace_back(kTA, kVA);
  return pairs;
}

std::vector<SplitRole> intra_analog_roles(const AuditConfig &config) {
  std::vector<SplitRole> roles = {kQ};
  if (config.roles.intra_analog_actives) {
    roles.push_back(kTA);
    roles.push_back(kVA);
  }
  if (config.roles.intra_analog_inactives) {
    roles.push_back(kTI);
    roles.push_back(kVI);
  }
  return roles;
}

std::vector<LeakFinding> detect_inter_identity(const data::TargetDataset &target,
                                               const AuditConfig &config) {
  std::vector<LeakFinding> out;
  for (const auto &[ra, rb]: inter_identity_pairs(config)) {
    const RoleSet &a = target.role(ra);
    const RoleSet &b = target.role(rb);
    for (const auto &[canonical, ids]: a.dedup_map) {
      const auto hit = b.dedup_map.find(canonical);
      if (hit == b.dedup_map.end())
        continue;
      LeakFinding f;
      f.category = Category::kInterIdentity;
      f.target = target.name;
      f.role_a = ra;
      f.role_b = rb;
      f.ids_a = ids;
      f.ids_b = hit->second;
      f.canonical_a = canonical;
      f.canonical_b = canonical;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<LeakFinding> detect_inter_analog(const data::TargetDataset &target,
                                             const AuditConfig &config) {
  config.validate();
  std::vector<LeakFinding> out;
  for (const auto &[ra, rb]: inter_analog_pairs(config)) {
    const RoleSet &a = target.role(ra);
    const RoleSet &b = target.role(rb);
    const auto refs_a = representatives(a);
    const auto refs_b = representatives(b);
    const auto pairs =
        sim::find_cross_pairs(refs_a, refs_b, {config.tc_inter, config.threads});
    for (const sim::SimilarityPair &p: pairs) {
      const std::string &ca = a.representative(p.index_a).canonical->text;
      const std::string &cb = b.representative(p.index_b).canonical->text;
      // Shared strings belong to the identity category.
      if (ca == cb)
        continue;
      LeakFinding f;
      f.category = Category::kInterAnalog;
      f.target = target.name;
      f.role_a = ra;
      f.role_b = rb;
      f.ids_a = ids_of(a, ca);
      f.ids_b = ids_of(b, cb);
      f.canonical_a = ca;
      f.canonical_b = cb;
      f.tc = p.tc;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<LeakFinding> detect_intra_identity(const data::TargetDataset &target) {
  std::vector<LeakFinding> out;
  for (const SplitRole role: data::kAllRoles) {
    for (const data::DuplicateGroup &g: target.role(role).dedup.groups) {
      LeakFinding f;
      f.category = Category::kIntraIdentity;
      f.target = target.name;
      f.role_a = role;
      f.role_b = role;
      f.ids_a = g.record_ids;
      f.canonical_a = g.canonical.text;
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<LeakFinding> detect_intra_analog(const data::TargetDataset &target,
                                             const AuditConfig &config,
                                             McsStats *stats) {
  config.validate();
  std::vector<LeakFinding> out;
  for (const SplitRole role: intra_analog_roles(config)) {
    const RoleSet &set = target.role(role);
    const auto refs = representatives(set);
    const std::size_t n = refs.size();
    if (n < 2)
      continue;

    std::vector<Candidate> candidates;
    const double floor_tc = config.tc_intra - config.prefilter_margin;
    if (config.mcs_prefilter && floor_tc > 0.0) {
      for (const auto &p: sim::find_self_pairs(refs, {floor_tc, config.threads}))
        candidates.push_back({p.index_a, p.index_b, p.tc});
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double tc = sim::tanimoto(*refs[i].fingerprint, *refs[j].fingerprint);
          candidates.push_back({i, j, tc});
        }
      }
    }
    if (candidates.empty())
      continue;

    // MCS works on the canonical graph so every duplicate shares one input.
    std::vector<chem::Molecule> mols;
    mols.reserve(n);
    for (std::size_t u = 0; u < n; ++u)
      mols.push_back(chem::parse_smiles(set.representative(u).canonical->text));

    std::vector<sim::McsResult> mcs(candidates.size());
    parallel_shards(candidates.size(), config.threads,
                    [&](std::size_t, std::size_t begin, std::size_t end) {
      for (std::size_t c = begin; c < end; ++c)
        mcs[c] = sim::mcs_ratio(mols[candidates[c].i], mols[candidates[c].j],
                                {config.mcs_budget});
    });

    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (stats) {
        ++stats->evaluated;
        if (!mcs[c].exact)
          ++stats->truncated;
      }
      const Candidate &cand = candidates[c];
      if (cand.tc < config.tc_intra && mcs[c].ratio < config.mcs_intra)
        continue;
      std::size_t i = cand.i;
      std::size_t j = cand.j;
      if (refs[j].id < refs[i].id)
        std::swap(i, j);
      LeakFinding f;
      f.category = Category::kIntraAnalog;
      f.target = target.name;
      f.role_a = role;
      f.role_b = role;
      f.canonical_a = set.representative(i).canonical->text;
      f.canonical_b = set.representative(j).canonical->text;
      f.ids_a = ids_of(set, f.canonical_a);
      f.ids_b = ids_of(set, f.canonical_b);
      f.tc = cand.tc;
      f.mcs_ratio = mcs[c].ratio;
      f.mcs_exact = mcs[c].exact;
      out.push_back(std::move(f));
    }
  }
  std::ranges::stable_sort(out, [](const LeakFinding &x, const LeakFinding &y) {
    if (x.role_a != y.role_a)
      return x.role_a < y.role_a;
    return finding_before(x, y);
  });
  return out;
}

std::size_t AuditSummary::finding_count() const {
  std::size_t n = 0;
  for (const TargetAudit &t: targets)
    n += t.findings.size();
  return n;
}

AuditSummary summarize(const data::Benchmark &benchmark, const AuditConfig &config) {
  config.validate();
  AuditSummary summary;
  summary.config = config;
  summary.params = benchmark.params;
  summary.warnings = benchmark.warnings;

  CountTable empty;
  for (const auto &[a, b]: inter_identity_pairs(config))
    empty[Category::kInterIdentity][role_pair_label(a, b)] = 0;
  for (const auto &[a, b]: inter_analog_pairs(config))
    empty[Category::kInterAnalog][role_pair_label(a, b)] = 0;
  for (const SplitRole r: data::kAllRoles)
    empty[Category::kIntraIdentity][role_pair_label(r, r)] = 0;
  for (const SplitRole r: intra_analog_roles(config))
    empty[Category::kIntraAnalog][role_pair_label(r, r)] = 0;
  summary.totals = empty;
  for (const Category c: {Category::kInterIdentity, Category::kIntraIdentity})
    summary.global_unique[c] = empty[c];

  const std::size_t n = benchmark.targets.size();
  summary.targets.resize(n);
  // One target per worker when there are several; a lone target gets the
  // threads for its own searches instead.
  AuditConfig inner = config;
  const int outer_threads = n > 1 ? config.threads : 1;
  if (n > 1)
    inner.threads = 1;
  parallel_shards(n, outer_threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t t = begin; t < end; ++t) {
      const data::TargetDataset &target = benchmark.targets[t];
      TargetAudit &ta = summary.targets[t];
      ta.name = target.name;
      ta.counts = empty;
      for (const SplitRole r: data::kAllRoles) {
        const auto i = static_cast<std::size_t>(r);
        ta.records[i] = target.role(r).records.size();
        ta.unique[i] = target.role(r).unique_count();
        ta.parse_failures[i] = target.role(r).parse_failures;
      }
      McsStats stats;
      std::vector<std::vector<LeakFinding>> parts;
      parts.push_back(detect_inter_identity(target, inner));
      parts.push_back(detect_inter_analog(target, inner));
      parts.push_back(detect_intra_identity(target));
      parts.push_back(detect_intra_analog(target, inner, &stats));
      for (auto &part: parts) {
        for (LeakFinding &f: part)
          ta.findings.push_back(std::move(f));
      }
      ta.mcs_evaluated = stats.evaluated;
      ta.mcs_truncated = stats.truncated;
      for (const LeakFinding &f: ta.findings)
        ++ta.counts[f.category][role_pair_label(f.role_a, f.role_b)];
    }
  });

  std::map<Category, std::map<std::string, std::set<std::string>>> distinct;
  for (const TargetAudit &ta: summary.targets) {
    for (const auto &[cat, cells]: ta.counts) {
      for (const auto &[label, count]: cells)
        summary.totals[cat][label] += count;
    }
    for (const LeakFinding &f: ta.findings) {
      if (f.category == Category::kInterIdentity ||
          f.category == Category::kIntraIdentity)
        distinct[f.category][role_pair_label(f.role_a, f.role_b)].insert(f.canonical_a);
    }
    for (const std::size_t pf: ta.parse_failures)
      summary.parse_failures += pf;
    summary.mcs_truncated += ta.mcs_truncated;
  }
  for (const auto &[cat, cells]: distinct) {
    for (const auto &[label, strings]: cells)
      summary.global_unique[cat][label] = strings.size();
  }

  for (const data::TargetDataset &target: benchmark.targets) {
    for (const auto &[a, b]: {RolePair {kTA, kTI}, RolePair {kVA, kVI}}) {
      std::size_t shared = 0;
      for (const auto &[canonical, ids]: target.role(a).dedup_map)
        shared += target.role(b).dedup_map.contains(canonical) ? 1 : 0;
      if (shared > 0)
        summary.warnings.push_back(
            "target '" + target.name + "': " + std::to_string(shared) +
            " molecule(s) labelled both " + std::string(data::role_name(a)) +
            " and " + std::string(data::role_name(b)) +
            (a == kTA ? "; the baseline treats them as actives" : ""));
    }
  }
  return summary;
}

}  // namespace leakaudit::audit
