//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "leakaudit/chem/canon.hpp"
#include "leakaudit/fp/fingerprint.hpp"

namespace leakaudit::data {

enum class SplitRole {
  kQuery,
  kTrainActive,
  kTrainInactive,
  kValActive,
  kValInactive,
};

inline constexpr std::array<SplitRole, 5> kAllRoles = {
    SplitRole::kQuery, SplitRole::kTrainActive, SplitRole::kTrainInactive,
    SplitRole::kValActive, SplitRole::kValInactive};

std::string_view role_name(SplitRole role);
std::optional<SplitRole> role_from_name(std::string_view name);
bool is_active_role(SplitRole role);

/// Base class for ingestion failures that abort a load.
class DataError: public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};
class IoError: public DataError {
public:
  using DataError::DataError;
};
class FormatError: public DataError {
public:
  using DataError::DataError;
};
class ManifestError: public DataError {
public:
  using DataError::DataError;
};

enum class FileFormat {
  /// "SMILES [whitespace] ID" per line; extra columns ignored.
  kSmi,
  /// "PDB_ID LIGAND_CODE SMILES" per line; the record id is
  /// "LIGAND_CODE@PDB_ID" so repeated ligand codes stay visible.
  kQueryTable,
};

struct ParseFailure {
  std::size_t offset = 0;
  std::string reason;
};

struct MoleculeRecord {
  std::string record_id;
  std::string raw_smiles;
  std::optional<chem::CanonicalSmiles> canonical;
  std::optional<ParseFailure> failure;
  std::optional<fp::Fingerprint> fingerprint;
  SplitRole role = SplitRole::kQuery;
  std::string target;
  std::string source_file;
  std::size_t line = 0;

  bool parsed() const { return canonical.has_value(); }
};

/// Parses, canonicalizes and fingerprints one input. Parse failures are
/// recorded on the returned record, never thrown.
MoleculeRecord make_record(std::string record_id, std::string raw_smiles,
                           SplitRole role, std::string target,
                           const fp::FingerprintParams &params = {});

struct LoadResult {
  std::vector<MoleculeRecord> records;
  std::size_t data_lines = 0;
  std::size_t parse_failures = 0;
  std::vector<std::string> warnings;
};

/// Reads one molecule file. Blank lines and lines starting with '#' are
/// skipped; every other line yields one record, failed parses included.
/// Throws IoError when unreadable and FormatError on malformed lines.
LoadResult load_molecule_file(const std::filesystem::path &path, SplitRole role,
                              const std::string &target,
                              FileFormat format = FileFormat::kSmi,
                              const fp::FingerprintParams &params = {});

struct DuplicateGroup {
  chem::CanonicalSmiles canonical;
  std::vector<std::string> record_ids;  ///< sorted; front() is kept
};

struct DedupResult {
  /// Indices of representative records (one per canonical string),
  /// ordered by canonical string.
  std::vector<std::size_t> unique;
  /// Groups of size >= 2, ordered by canonical string.
  std::vector<DuplicateGroup> groups;
};

/// Groups parsed records by canonical SMILES and keeps the smallest record
/// id of each group. Unparsed records are neither unique nor duplicate.
DedupResult dedup(const std::vector<MoleculeRecord> &records);

/// All records of one role with their deduplicated view.
struct RoleSet {
  std::vector<MoleculeRecord> records;
  DedupResult dedup;
  /// canonical text -> every record id carrying it
  std::map<std::string, std::vector<std::string>> dedup_map;
  std::size_t data_lines = 0;
  std::size_t parse_failures = 0;
  bool declared = false;

  const MoleculeRecord &representative(std::size_t unique_index) const {
    return records[dedup.unique[unique_index]];
  }
  std::size_t unique_count() const { return dedup.unique.size(); }
  std::size_t duplicate_records() const;
};

RoleSet make_role_set(std::vector<MoleculeRecord> records);

struct TargetDataset {
  std::string name;
  std::array<RoleSet, 5> roles;
  bool allow_empty_query = false;

  const RoleSet &role(SplitRole r) const {
    return roles[static_cast<std::size_t>(r)];
  }
  RoleSet &role(SplitRole r) { return roles[static_cast<std::size_t>(r)]; }
};

struct Benchmark {
  std::vector<TargetDataset> targets;
  std::string manifest_path;
  fp::FingerprintParams params;
  std::vector<std::string> warnings;
};

struct ManifestOptions {
  /// Overrides the manifest's fingerprint block when set.
  std::optional<int> radius;
  std::optional<int> n_bits;
  int threads = 1;
};

/// Loads a JSON manifest (schema in the README) and every file it names.
/// Relative paths resolve against the manifest's directory. Throws
/// ManifestError on schema problems, missing files, duplicate targets and
/// missing roles.
Benchmark load_manifest(const std::filesystem::path &path,
                        const ManifestOptions &options = {});

/// Deterministic JSON dump of the loaded state (ids, canonical strings,
/// fingerprint digests, dedup groups).
std::string serialize_state(const Benchmark &benchmark);

}  // namespace leakaudit::data
