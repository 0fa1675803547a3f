//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

#include "leakaudit/parallel.hpp"
#include "leakaudit/screen/screen.hpp"
#include "leakaudit/sim/similarity.hpp"

namespace leakaudit::screen {
namespace {

std::vector<const fp::Fingerprint *> unique_fingerprints(const data::RoleSet &set) {
  std::vector<const fp::Fingerprint *> out;
  out.reserve(set.unique_count());
  for (std::size_t u = 0; u < set.unique_count(); ++u)
    out.push_back(&*set.representative(u).fingerprint);
  return out;
}

bool entry_before(const RankEntry &x, const RankEntry &y) {
  if (x.score != y.score)
    return x.score > y.score;
  if (x.record_id != y.record_id)
    return x.record_id < y.record_id;
  return x.active && !y.active;
}

}  // namespace

std::string_view provenance_name(Provenance p) {
  switch (p) {
  case Provenance::kExactActive:
    return "exact_active";
  case Provenance::kExactInactive:
    return "exact_inactive";
  case Provenance::kSimilarity:
    return "similarity";
  case Provenance::kUnparsed:
    return "unparsed";
  }
  return "unknown";
}

BaselineScorer::BaselineScorer(const data::RoleSet &train_actives,
                               const data::RoleSet &train_inactives,
                               const data::RoleSet &queries)
    : active_fps_(unique_fingerprints(train_actives)),
      query_fps_(unique_fingerprints(queries)) {
  for (const auto &[canonical, ids]: train_actives.dedup_map)
    actives_.insert(canonical);
  for (const auto &[canonical, ids]: train_inactives.dedup_map) {
    inactives_.insert(canonical);
    if (actives_.contains(canonical))
      conflicts_.push_back(canonical);
  }
}

double BaselineScorer::max_tc(const fp::Fingerprint &f,
                              const std::vector<const fp::Fingerprint *> &group) {
  double best = 0.0;
  for (const fp::Fingerprint *g: group)
    best = std::max(best, sim::tanimoto(f, *g));
  return best;
}

BaselineScore BaselineScorer::score(const data::MoleculeRecord &mol) const {
  BaselineScore s;
  if (!mol.parsed()) {
    s.value = -std::numeric_limits<double>::infinity();
    s.provenance = Provenance::kUnparsed;
    return s;
  }
  if (actives_.contains(mol.canonical->text)) {
    s.value = kActiveScore;
    s.provenance = Provenance::kExactActive;
    return s;
  }
  if (inactives_.contains(mol.canonical->text)) {
    s.value = kInactiveScore;
    s.provenance = Provenance::kExactInactive;
    return s;
  }
  s.provenance = Provenance::kSimilarity;
  double sum = 0.0;
  if (active_fps_.empty()) {
    s.empty_group = true;
  } else {
    s.max_tc_actives = max_tc(*mol.fingerprint, active_fps_);
    sum += *s.max_tc_actives;
  }
  if (query_fps_.empty()) {
    s.empty_group = true;
  } else {
    s.max_tc_queries = max_tc(*mol.fingerprint, query_fps_);
    sum += *s.max_tc_queries;
  }
  s.value = sum / 2.0;
  return s;
}

BaselineScore baseline_score(const data::MoleculeRecord &mol,
                             const data::RoleSet &train_actives,
                             const data::RoleSet &train_inactives,
                             const data::RoleSet &queries) {
  return BaselineScorer(train_actives, train_inactives, queries).score(mol);
}

Ranking make_ranking(std::vector<RankEntry> entries) {
  Ranking r;
  r.entries = std::move(entries);
  std::ranges::sort(r.entries, entry_before);
  r.n = r.entries.size();
  r.actives = static_cast<std::size_t>(
      std::ranges::count_if(r.entries, [](const RankEntry &e) { return e.active; }));
  return r;
}

Ranking rank_validation(const data::TargetDataset &target, int threads) {
  const data::RoleSet &va = target.role(data::SplitRole::kValActive);
  const data::RoleSet &vi = target.role(data::SplitRole::kValInactive);
  if (va.records.empty() || vi.records.empty())
    throw DegenerateInput("target '" + target.name +
                          "' has an empty validation role");
  const BaselineScorer scorer(target.role(data::SplitRole::kTrainActive),
                              target.role(data::SplitRole::kTrainInactive),
                              target.role(data::SplitRole::kQuery));

  std::vector<const data::MoleculeRecord *> recs;
  for (const auto &r: va.records)
    recs.push_back(&r);
  for (const auto &r: vi.records)
    recs.push_back(&r);
  std::vector<RankEntry> entries(recs.size());
  std::vector<std::uint8_t> empty_group(recs.size(), 0);
  parallel_shards(recs.size(), threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const BaselineScore s = scorer.score(*recs[i]);
      entries[i] = {recs[i]->record_id, s.value,
                    recs[i]->role == data::SplitRole::kValActive, s.provenance};
      empty_group[i] = s.empty_group ? 1 : 0;
    }
  });
  Ranking ranking = make_ranking(std::move(entries));
  ranking.empty_group_entries =
      static_cast<std::size_t>(std::ranges::count(empty_group, 1));
  return ranking;
}

std::string scores_tsv(const Ranking &ranking) {
  std::ostringstream out;
  out << "record_id\tscore\tprovenance\tlabel\n";
  char buf[64];
  for (const RankEntry &e: ranking.entries) {
    std::snprintf(buf, sizeof buf, "%.17g", e.score);
    out << e.record_id << '\t' << buf << '\t' << provenance_name(e.provenance)
        << '\t' << (e.active ? "active" : "inactive") << '\n';
  }
  return out.str();
}

Ranking read_scores_tsv(std::string_view text) {
  std::vector<RankEntry> entries;
  std::istringstream in {std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || line.front() == '#' || line.starts_with("record_id\t"))
      continue;
    std::vector<std::string> cols;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      cols.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos)
        break;
      start = tab + 1;
    }
    if (cols.size() != 3 && cols.size() != 4)
      throw data::FormatError("scores line " + std::to_string(lineno) +
                              ": expected 3 or 4 tab-separated columns");
    RankEntry e;
    e.record_id = cols[0];
    char *end = nullptr;
    e.score = std::strtod(cols[1].c_str(), &end);
    if (end == cols[1].c_str() || *end != '\0')
      throw data::FormatError("scores line " + std::to_string(lineno) +
                              ": bad score '" + cols[1] + "'");
    const std::string &label = cols.back();
    if (label == "active" || label == "1")
      e.active = true;
    else if (label == "inactive" || label == "0")
      e.active = false;
    else
      throw data::FormatError("scores line " + std::to_string(lineno) +
                              ": bad label '" + label + "'");
    if (cols.size() == 4) {
      for (const Provenance p: {Provenance::kExactActive, Provenance::kExactInactive,
                                Provenance::kSimilarity, Provenance::kUnparsed}) {
        if (provenance_name(p) == cols[2])
          e.provenance = p;
      }
    }
    entries.push_back(std::move(e));
  }
  return make_ranking(std::move(entries));
}

}  // namespace leakaudit::screen
