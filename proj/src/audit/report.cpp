//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "leakaudit/audit/audit.hpp"
#include "leakaudit/version.hpp"

namespace leakaudit::audit {
namespace {

using nlohmann::ordered_json;

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

ordered_json finding_json(const LeakFinding &f) {
  ordered_json j;
  j["role_a"] = data::role_name(f.role_a);
  j["role_b"] = data::role_name(f.role_b);
  j["ids_a"] = f.ids_a;
  if (f.category != Category::kIntraIdentity)
    j["ids_b"] = f.ids_b;
  j["canonical_a"] = f.canonical_a;
  if (f.category == Category::kInterAnalog || f.category == Category::kIntraAnalog)
    j["canonical_b"] = f.canonical_b;
  if (f.tc)
    j["tc"] = *f.tc;
  if (f.mcs_ratio)
    j["mcs_ratio"] = *f.mcs_ratio;
  if (f.mcs_exact)
    j["mcs_exact"] = *f.mcs_exact;
  return j;
}

ordered_json counts_json(const CountTable &table) {
  ordered_json j = ordered_json::object();
  for (const auto &[cat, cells]: table) {
    ordered_json c = ordered_json::object();
    for (const auto &[label, n]: cells)
      c[label] = n;
    j[std::string(category_name(cat))] = std::move(c);
  }
  return j;
}

ordered_json per_role(const std::array<std::size_t, 5> &values) {
  ordered_json j = ordered_json::object();
  for (const SplitRole r: data::kAllRoles)
    j[std::string(data::role_name(r))] = values[static_cast<std::size_t>(r)];
  return j;
}

std::vector<std::string> caveats(const AuditSummary &s) {
  const AuditConfig &c = s.config;
  std::vector<std::string> out;
  out.push_back("identity means equal canonical SMILES under this tool's "
                "canonicalizer; stereochemistry is ignored and counts can "
                "differ from other toolkits");
  out.push_back("all '.'-separated components are kept, so a salt form and "
                "its parent are different molecules; only six-membered "
                "Kekule rings are aromatized");
  out.push_back("MCS ratio = atoms in the maximum connected common induced "
                "subgraph / larger heavy-atom count");
  const double floor_tc = c.tc_intra - c.prefilter_margin;
  if (c.mcs_prefilter && floor_tc > 0.0)
    out.push_back("intra-set MCS evaluated only for pairs with tc >= " +
                  fixed(floor_tc, 4) + "; pairs below that with MCS ratio >= " +
                  fixed(c.mcs_intra, 4) + " are not reported");
  else
    out.push_back("intra-set MCS evaluated exhaustively for every pair");
  if (s.mcs_truncated > 0)
    out.push_back(std::to_string(s.mcs_truncated) +
                  " MCS search(es) hit the expansion budget; their ratios "
                  "are lower bounds");
  out.push_back("analog findings exclude pairs with identical canonical SMILES");
  return out;
}

}  // namespace

std::string report_json(const AuditSummary &summary, const data::Benchmark &benchmark,
                        const std::string &run_config_json) {
  const AuditConfig &c = summary.config;
  ordered_json doc;
  doc["schema_version"] = 1;
  doc["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  if (!run_config_json.empty())
    doc["run_config"] = ordered_json::parse(run_config_json);
  doc["config"] = {
      {"tc_inter", c.tc_inter},
      {"tc_intra", c.tc_intra},
      {"mcs_intra", c.mcs_intra},
      {"mcs_prefilter", c.mcs_prefilter},
      {"prefilter_margin", c.prefilter_margin},
      {"mcs_budget", c.mcs_budget},
      {"roles",
       {{"active_vs_active", c.roles.active_vs_active},
        {"inactive_vs_inactive", c.roles.inactive_vs_inactive},
        {"query_vs_all", c.roles.query_vs_all},
        {"cross_label", c.roles.cross_label},
        {"analog_query", c.roles.analog_query},
        {"analog_inactives", c.roles.analog_inactives},
        {"intra_analog_actives", c.roles.intra_analog_actives},
        {"intra_analog_inactives", c.roles.intra_analog_inactives}}},
      {"fingerprint",
       {{"kind", "ecfp"},
        {"radius", summary.params.radius},
        {"n_bits", summary.params.n_bits}}}};
  doc["caveats"] = caveats(summary);
  doc["warnings"] = summary.warnings;

  ordered_json sj;
  sj["findings"] = summary.finding_count();
  sj["totals"] = counts_json(summary.totals);
  sj["global_unique"] = counts_json(summary.global_unique);
  ordered_json per_target = ordered_json::object();
  for (const TargetAudit &t: summary.targets)
    per_target[t.name] = counts_json(t.counts);
  sj["targets"] = std::move(per_target);
  sj["parse_failures"] = summary.parse_failures;
  std::size_t evaluated = 0;
  for (const TargetAudit &t: summary.targets)
    evaluated += t.mcs_evaluated;
  sj["mcs"] = {{"evaluated", evaluated}, {"truncated", summary.mcs_truncated}};
  doc["summary"] = std::move(sj);

  ordered_json datasets = ordered_json::array();
  for (const TargetAudit &t: summary.targets)
    datasets.push_back({{"name", t.name},
                        {"records", per_role(t.records)},
                        {"unique", per_role(t.unique)},
                        {"parse_failures", per_role(t.parse_failures)}});
  doc["datasets"] = std::move(datasets);

  ordered_json failures = ordered_json::array();
  for (const data::TargetDataset &t: benchmark.targets) {
    for (const SplitRole r: data::kAllRoles) {
      for (const data::MoleculeRecord &rec: t.role(r).records) {
        if (rec.parsed())
          continue;
        failures.push_back({{"target", t.name},
                            {"role", data::role_name(r)},
                            {"id", rec.record_id},
                            {"file", rec.source_file},
                            {"line", rec.line},
                            {"smiles", rec.raw_smiles},
                            {"offset", rec.failure->offset},
                            {"reason", rec.failure->reason}});
      }
    }
  }
  doc["parse_failures"] = std::move(failures);

  ordered_json categories = ordered_json::object();
  for (const Category cat: kAllCategories) {
    ordered_json by_target = ordered_json::object();
    for (const TargetAudit &t: summary.targets) {
      ordered_json list = ordered_json::array();
      for (const LeakFinding &f: t.findings) {
        if (f.category == cat)
          list.push_back(finding_json(f));
      }
      by_target[t.name] = std::move(list);
    }
    categories[std::string(category_name(cat))] = std::move(by_target);
  }
  doc["categories"] = std::move(categories);
  return doc.dump(2) + "\n";
}

std::string report_table(const AuditSummary &summary) {
  std::vector<std::string> header = {"category", "roles"};
  for (const TargetAudit &t: summary.targets)
    header.push_back(t.name);
  header.push_back("total");
  header.push_back("distinct");

  std::vector<std::vector<std::string>> rows;
  for (const auto &[cat, cells]: summary.totals) {
    for (const auto &[label, total]: cells) {
      std::vector<std::string> row = {std::string(category_name(cat)), label};
      for (const TargetAudit &t: summary.targets) {
        const auto ci = t.counts.find(cat);
        std::size_t n = 0;
        if (ci != t.counts.end()) {
          const auto li = ci->second.find(label);
          n = li == ci->second.end() ? 0 : li->second;
        }
        row.push_back(std::to_string(n));
      }
      row.push_back(std::to_string(total));
      const auto gi = summary.global_unique.find(cat);
      if (gi != summary.global_unique.end() && gi->second.contains(label))
        row.push_back(std::to_string(gi->second.at(label)));
      else
        row.push_back("-");
      rows.push_back(std::move(row));
    }
  }

  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) {
    width[c] = header[c].size();
    for (const auto &row: rows)
      width[c] = std::max(width[c], row[c].size());
  }
  std::ostringstream out;
  const AuditConfig &c = summary.config;
  out << kToolName << ' ' << kToolVersion << " audit summary\n";
  out << "fingerprint: ECFP radius " << summary.params.radius << ", "
      << summary.params.n_bits << " bits; inter-set tc >= " << fixed(c.tc_inter, 2)
      << "; intra-set tc >= " << fixed(c.tc_intra, 2) << " or MCS >= "
      << fixed(c.mcs_intra, 2) << "\n\n";
  auto emit = [&](const std::vector<std::string> &row) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i < 2)
        out << row[i] << std::string(width[i] - row[i].size(), ' ');
      else
        out << std::string(width[i] - row[i].size(), ' ') << row[i];
      out << (i + 1 < row.size() ? "  " : "\n");
    }
  };
  emit(header);
  for (const auto &row: rows)
    emit(row);
  out << "\nparse failures: " << summary.parse_failures << "\n";
  for (const std::string &line: caveats(summary))
    out << "note: " << line << "\n";
  for (const std::string &w: summary.warnings)
    out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace leakaudit::audit
