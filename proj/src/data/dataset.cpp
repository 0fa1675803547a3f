//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/data/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/parallel.hpp"

namespace leakaudit::data {
namespace {

constexpr std::array<std::string_view, 5> kRoleNames = {
    "query", "train_active", "train_inactive", "val_active", "val_inactive"};

bool is_separator(char c) {
  const auto u = static_cast<unsigned char>(c);
  return std::isspace(u) || std::iscntrl(u);
}

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && is_separator(line[i]))
      ++i;
    const std::size_t start = i;
    while (i < line.size() && !is_separator(line[i]))
      ++i;
    if (i > start)
      tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

std::uint64_t fingerprint_digest(const fp::Fingerprint &f) {
  std::vector<std::int64_t> words(f.words().begin(), f.words().end());
  return fp::hash_sequence(words);
}

}  // namespace

std::string_view role_name(SplitRole role) {
  return kRoleNames[static_cast<std::size_t>(role)];
}

std::optional<SplitRole> role_from_name(std::string_view name) {
  for (const SplitRole r: kAllRoles) {
    if (role_name(r) == name)
      return r;
  }
  return std::nullopt;
}

bool is_active_role(SplitRole role) {
  return role == SplitRole::kQuery || role == SplitRole::kTrainActive ||
         role == SplitRole::kValActive;
}

MoleculeRecord make_record(std::string record_id, std::string raw_smiles,
                           SplitRole role, std::string target,
                           const fp::FingerprintParams &params) {
  MoleculeRecord rec;
  rec.record_id = std::move(record_id);
  rec.raw_smiles = std::move(raw_smiles);
  rec.role = role;
  rec.target = std::move(target);
  try {
    const chem::Molecule mol = chem::parse_smiles(rec.raw_smiles);
    rec.canonical = chem::canonical_smiles(mol);
    rec.fingerprint = fp::ecfp(mol, params);
  } catch (const chem::ParseError &e) {
    rec.failure = ParseFailure {e.offset(), e.reason()};
  }
  return rec;
}

LoadResult load_molecule_file(const std::filesystem::path &path, SplitRole role,
                              const std::string &target, FileFormat format,
                              const fp::FingerprintParams &params) {
  params.validate();
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot read molecule file '" + path.string() + "'");

  const std::string file = path.filename().string();
  LoadResult result;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string_view content = trim(line);
    if (content.empty() || content.front() == '#')
      continue;

    const auto tokens = tokenize(content);
    if (tokens.empty())
      throw FormatError(file + ":" + std::to_string(lineno) +
                        ": line has no tokens");

    std::string id;
    std::string smiles;
    if (format == FileFormat::kQueryTable) {
      if (tokens.size() < 3)
        throw FormatError(file + ":" + std::to_string(lineno) +
                          ": query table lines need PDB_ID LIGAND_CODE SMILES");
      id = std::string(tokens[1]) + "@" + std::string(tokens[0]);
      smiles = tokens[2];
    } else {
      smiles = tokens[0];
      id = tokens.size() >= 2 ? std::string(tokens[1])
                              : file + ":" + std::to_string(lineno);
    }

    ++result.data_lines;
    MoleculeRecord rec = make_record(std::move(id), std::move(smiles), role,
                                     target, params);
    rec.source_file = file;
    rec.line = lineno;
    if (!rec.parsed())
      ++result.parse_failures;
    result.records.push_back(std::move(rec));
  }
  if (in.bad())
    throw IoError("error while reading '" + path.string() + "'");
  if (result.data_lines == 0)
    result.warnings.push_back("molecule file '" + path.string() +
                              "' contains no records");
  return result;
}

DedupResult dedup(const std::vector<MoleculeRecord> &records) {
  std::map<std::string_view, std::vector<std::size_t>> by_key;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].parsed())
      by_key[records[i].canonical->text].push_back(i);
  }

  DedupResult out;
  out.unique.reserve(by_key.size());
  for (auto &[key, members]: by_key) {
    std::ranges::sort(members, [&](std::size_t x, std::size_t y) {
      if (records[x].record_id != records[y].record_id)
        return records[x].record_id < records[y].record_id;
      return x < y;
    });
    out.unique.push_back(members.front());
    if (members.size() >= 2) {
      DuplicateGroup g;
      g.canonical = *records[members.front()].canonical;
      for (const std::size_t m: members)
        g.record_ids.push_back(records[m].record_id);
      out.groups.push_back(std::move(g));
    }
  }
  return out;
}

std::size_t RoleSet::duplicate_records() const {
  std::size_t extra = 0;
  for (const DuplicateGroup &g: dedup.groups)
    extra += g.record_ids.size() - 1;
  return extra;
}

RoleSet make_role_set(std::vector<MoleculeRecord> records) {
  RoleSet set;
  set.records = std::move(records);
  set.dedup = dedup(set.records);
  for (const MoleculeRecord &r: set.records) {
    if (r.parsed())
      set.dedup_map[r.canonical->text].push_back(r.record_id);
    else
      ++set.parse_failures;
  }
  for (auto &[key, ids]: set.dedup_map)
    std::ranges::sort(ids);
  set.data_lines = set.records.size();
  return set;
}

Benchmark load_manifest(const std::filesystem::path &path,
                        const ManifestOptions &options) {
  using nlohmann::json;
  std::ifstream in(path);
  if (!in)
    throw ManifestError("cannot read manifest '" + path.string() + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw ManifestError("manifest '" + path.string() +
                        "' is not valid JSON: " + e.what());
  }
  if (!doc.is_object())
    throw ManifestError("manifest root must be an object");

  static const std::set<std::string> kTopKeys = {"schema_version",
                                                 "fingerprint", "targets"};
  for (const auto &[key, value]: doc.items()) {
    if (!kTopKeys.contains(key))
      throw ManifestError("unknown manifest key '" + key + "'");
  }
  if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer() ||
      doc["schema_version"].get<int>() != 1)
    throw ManifestError("manifest schema_version must be 1");

  Benchmark bench;
  bench.manifest_path = path.string();
  if (doc.contains("fingerprint")) {
    const json &fpj = doc["fingerprint"];
    if (!fpj.is_object())
      throw ManifestError("'fingerprint' must be an object");
    for (const auto &[key, value]: fpj.items()) {
      if (key != "radius" && key != "n_bits")
        throw ManifestError("unknown fingerprint key '" + key + "'");
      if (!value.is_number_integer())
        throw ManifestError("fingerprint '" + key + "' must be an integer");
    }
    bench.params.radius = fpj.value("radius", bench.params.radius);
    bench.params.n_bits = fpj.value("n_bits", bench.params.n_bits);
  }
  if (options.radius)
    bench.params.radius = *options.radius;
  if (options.n_bits)
    bench.params.n_bits = *options.n_bits;
  try {
    bench.params.validate();
  } catch (const std::invalid_argument &e) {
    throw ManifestError(std::string("invalid fingerprint parameters: ") + e.what());
  }

  if (!doc.contains("targets") || !doc["targets"].is_array())
    throw ManifestError("manifest needs a 'targets' array");

  struct Job {
    std::size_t target;
    SplitRole role;
    std::filesystem::path file;
    FileFormat format;
  };
  std::vector<Job> jobs;
  const std::filesystem::path base = path.parent_path();
  std::set<std::string> names;

  for (const json &tj: doc["targets"]) {
    if (!tj.is_object())
      throw ManifestError("each target must be an object");
    if (!tj.contains("name") || !tj["name"].is_string() ||
        tj["name"].get<std::string>().empty())
      throw ManifestError("each target needs a non-empty 'name'");
    TargetDataset t;
    t.name = tj["name"].get<std::string>();
    if (!names.insert(t.name).second)
      throw ManifestError("duplicate target name '" + t.name + "'");
    for (const auto &[key, value]: tj.items()) {
      if (key != "name" && key != "allow_empty_query" && !role_from_name(key))
        throw ManifestError("target '" + t.name + "': unknown key '" + key + "'");
    }
    if (tj.contains("allow_empty_query")) {
      if (!tj["allow_empty_query"].is_boolean())
        throw ManifestError("target '" + t.name +
                            "': allow_empty_query must be a boolean");
      t.allow_empty_query = tj["allow_empty_query"].get<bool>();
    }

    const std::size_t ti = bench.targets.size();
    for (const SplitRole role: kAllRoles) {
      const std::string key(role_name(role));
      if (!tj.contains(key)) {
        if (role == SplitRole::kQuery && t.allow_empty_query)
          continue;
        throw ManifestError("target '" + t.name + "': missing required role '" +
                            key + "'");
      }
      const json &entry = tj[key];
      std::string file;
      FileFormat format =
          role == SplitRole::kQuery ? FileFormat::kQueryTable : FileFormat::kSmi;
      if (entry.is_string()) {
        file = entry.get<std::string>();
      } else if (entry.is_object() && entry.contains("path") &&
                 entry["path"].is_string()) {
        file = entry["path"].get<std::string>();
        if (entry.contains("format")) {
          const std::string f = entry["format"].is_string()
                                    ? entry["format"].get<std::string>()
                                    : std::string {};
          if (f == "smi")
            format = FileFormat::kSmi;
          else if (f == "query_table")
            format = FileFormat::kQueryTable;
          else
            throw ManifestError("target '" + t.name + "', role '" + key +
                                "': unknown format '" + f + "'");
        }
      } else {
        throw ManifestError("target '" + t.name + "', role '" + key +
                            "': expected a path or {path, format}");
      }
      std::filesystem::path p(file);
      if (p.is_relative())
        p = base / p;
      if (!std::filesystem::is_regular_file(p))
        throw ManifestError("target '" + t.name + "', role '" + key +
                            "': missing file '" + p.string() + "'");
      t.role(role).declared = true;
      jobs.push_back({ti, role, p, format});
    }
    bench.targets.push_back(std::move(t));
  }

  std::vector<LoadResult> loaded(jobs.size());
  const std::size_t shards = shard_count(jobs.size(), options.threads);
  (void)shards;
  parallel_shards(jobs.size(), options.threads,
                  [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      const Job &job = jobs[j];
      try {
        loaded[j] = load_molecule_file(job.file, job.role,
                                       bench.targets[job.target].name,
                                       job.format, bench.params);
      } catch (const DataError &e) {
        throw ManifestError("target '" + bench.targets[job.target].name +
                            "', role '" + std::string(role_name(job.role)) +
                            "': " + e.what());
      }
    }
  });

  for (std::size_t j = 0; j < jobs.size(); ++j) {
    const Job &job = jobs[j];
    TargetDataset &t = bench.targets[job.target];
    for (auto &w: loaded[j].warnings)
      bench.warnings.push_back("target '" + t.name + "': " + w);
    const bool declared = t.role(job.role).declared;
    t.role(job.role) = make_role_set(std::move(loaded[j].records));
    t.role(job.role).declared = declared;
  }
  for (const TargetDataset &t: bench.targets) {
    if (t.role(SplitRole::kQuery).records.empty() && !t.allow_empty_query)
      throw ManifestError("target '" + t.name +
                          "': query set is empty; set allow_empty_query to "
                          "declare this explicitly");
  }
  return bench;
}

std::string serialize_state(const Benchmark &benchmark) {
  using nlohmann::ordered_json;
  ordered_json doc;
  doc["manifest"] = benchmark.manifest_path;
  doc["fingerprint"] = {{"radius", benchmark.params.radius},
                        {"n_bits", benchmark.params.n_bits}};
  ordered_json targets = ordered_json::array();
  for (const TargetDataset &t: benchmark.targets) {
    ordered_json tj;
    tj["name"] = t.name;
    for (const SplitRole role: kAllRoles) {
      const RoleSet &rs = t.role(role);
      ordered_json rj;
      ordered_json recs = ordered_json::array();
      for (const MoleculeRecord &r: rs.records) {
        ordered_json rec;
        rec["id"] = r.record_id;
        rec["smiles"] = r.raw_smiles;
        if (r.parsed()) {
          rec["canonical"] = r.canonical->text;
          rec["fp_popcount"] = r.fingerprint->popcount();
          std::ostringstream hex;
          hex << std::hex << fingerprint_digest(*r.fingerprint);
          rec["fp_digest"] = hex.str();
        } else {
          rec["error"] = r.failure->reason;
          rec["error_offset"] = r.failure->offset;
        }
        recs.push_back(std::move(rec));
      }
      rj["records"] = std::move(recs);
      ordered_json groups = ordered_json::array();
      for (const DuplicateGroup &g: rs.dedup.groups)
        groups.push_back({{"canonical", g.canonical.text}, {"ids", g.record_ids}});
      rj["duplicate_groups"] = std::move(groups);
      rj["unique"] = rs.unique_count();
      tj[std::string(role_name(role))] = std::move(rj);
    }
    targets.push_back(std::move(tj));
  }
  doc["targets"] = std::move(targets);
  return doc.dump(2);
}

}  // namespace leakaudit::data
