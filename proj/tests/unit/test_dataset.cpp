//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>

#include <json.hpp>

#include "leakaudit/data/dataset.hpp"
#include "planted.hpp"

namespace data = leakaudit::data;
namespace fs = std::filesystem;
using data::SplitRole;

namespace {

class TempDir {
public:
  TempDir() {
    const auto *info = ::testing::UnitTest::GetInstance()->current_test_info();
    path_ = fs::temp_directory_path() /
            ("leakaudit_test_" + std::string(info->test_suite_name()) + "_" + info->name());
    fs::remove_all(path_);
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path &path() const { return path_; }

  fs::path write(const std::string &name, const std::string &content) const {
    const fs::path p = path_ / name;
    fs::create_directories(p.parent_path());
    std::ofstream(p, std::ios::binary) << content;
    return p;
  }

private:
  fs::path path_;
};

// Minimal valid target directory with one line per role.
void write_target(const TempDir &d, const std::string &name) {
  d.write(name + "/q.txt", "1ABC LIG CCO\n");
  d.write(name + "/ta.smi", "CCN ta1\n");
  d.write(name + "/ti.smi", "CCC ti1\n");
  d.write(name + "/va.smi", "CCCl va1\n");
  d.write(name + "/vi.smi", "CCBr vi1\n");
}

nlohmann::json target_json(const std::string &name) {
  return {{"name", name},
          {"query", name + "/q.txt"},
          {"train_active", name + "/ta.smi"},
          {"train_inactive", name + "/ti.smi"},
          {"val_active", name + "/va.smi"},
          {"val_inactive", name + "/vi.smi"}};
}

fs::path write_manifest(const TempDir &d, const nlohmann::json &m) {
  return d.write("manifest.json", m.dump(2));
}

nlohmann::json one_target_manifest() {
  return {{"schema_version", 1}, {"targets", {target_json("A")}}};
}

std::string manifest_error(const fs::path &p) {
  try {
    data::load_manifest(p);
  } catch (const data::ManifestError &e) {
    return e.what();
  }
  ADD_FAILURE() << "expected ManifestError";
  return {};
}

}  // namespace

TEST(Roles, Names) {
  for (const SplitRole r: data::kAllRoles)
    EXPECT_EQ(data::role_from_name(data::role_name(r)), r);
  EXPECT_EQ(data::role_name(SplitRole::kTrainInactive), "train_inactive");
  EXPECT_FALSE(data::role_from_name("train").has_value());
  EXPECT_TRUE(data::is_active_role(SplitRole::kValActive));
  EXPECT_TRUE(data::is_active_role(SplitRole::kQuery));
  EXPECT_FALSE(data::is_active_role(SplitRole::kValInactive));
}

TEST(LoadFile, SmiFormat) {
  TempDir d;
  const auto p = d.write("x.smi",
                         "# header\n"
                         "\n"
                         "CCO  ethanol extra columns\n"
                         "c1ccccc1\tbenzene\n"
                         "OCC\n"
                         "C1CC broken\n"
                         "CC(=O)O acid\r\n");
  const auto r = data::load_molecule_file(p, SplitRole::kTrainActive, "T");
  ASSERT_EQ(r.records.size(), 5u);
  EXPECT_EQ(r.data_lines, 5u);
  EXPECT_EQ(r.parse_failures, 1u);
  EXPECT_EQ(r.records[0].record_id, "ethanol");
  EXPECT_EQ(r.records[0].line, 3u);
  EXPECT_EQ(r.records[1].record_id, "benzene");
  EXPECT_EQ(r.records[2].record_id, "x.smi:5");
  EXPECT_FALSE(r.records[3].parsed());
  ASSERT_TRUE(r.records[3].failure.has_value());
  EXPECT_FALSE(r.records[3].fingerprint.has_value());
  EXPECT_EQ(r.records[4].record_id, "acid");
  EXPECT_TRUE(r.records[4].parsed());
  EXPECT_EQ(r.records[0].canonical, r.records[2].canonical);
  EXPECT_EQ(r.records[0].target, "T");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(LoadFile, QueryTable) {
  TempDir d;
  const auto p = d.write("q.txt", "5ABC LIG CCO\n6XYZ LIG OCC\n");
  const auto r = data::load_molecule_file(p, SplitRole::kQuery, "T", data::FileFormat::kQueryTable);
  ASSERT_EQ(r.records.size(), 2u);
  EXPECT_EQ(r.records[0].record_id, "LIG@5ABC");
  EXPECT_EQ(r.records[1].record_id, "LIG@6XYZ");
  const auto bad = d.write("bad.txt", "5ABC LIG\n");
  EXPECT_THROW(data::load_molecule_file(bad, SplitRole::kQuery, "T", data::FileFormat::kQueryTable),
               data::FormatError);
}

TEST(LoadFile, EmptyFileWarnsAndMissingFileThrows) {
  TempDir d;
  const auto p = d.write("e.smi", "# only a comment\n\n");
  const auto r = data::load_molecule_file(p, SplitRole::kValActive, "T");
  EXPECT_TRUE(r.records.empty());
  ASSERT_EQ(r.warnings.size(), 1u);
  EXPECT_THROW(data::load_molecule_file(d.path() / "nope.smi", SplitRole::kValActive, "T"),
               data::IoError);
}

TEST(LoadFile, ControlOnlyLineIsFormatError) {
  TempDir d;
  const auto p = d.write("c.smi", "CCO a\n\x01\x02\n");
  try {
    data::load_molecule_file(p, SplitRole::kValActive, "T");
    FAIL() << "expected FormatError";
  } catch (const data::FormatError &e) {
    EXPECT_NE(std::string(e.what()).find("c.smi:2"), std::string::npos) << e.what();
  }
}

TEST(Dedup, KeepsSmallestIdAndGroupsDuplicates) {
  std::vector<data::MoleculeRecord> recs;
  recs.push_back(data::make_record("m3", "OCC", SplitRole::kTrainInactive, "T"));
  recs.push_back(data::make_record("m1", "CCO", SplitRole::kTrainInactive, "T"));
  recs.push_back(data::make_record("m2", "CCN", SplitRole::kTrainInactive, "T"));
  recs.push_back(data::make_record("m0", "C(", SplitRole::kTrainInactive, "T"));
  recs.push_back(data::make_record("m4", "C(O)C", SplitRole::kTrainInactive, "T"));
  const data::RoleSet rs = data::make_role_set(recs);
  EXPECT_EQ(rs.unique_count(), 2u);
  EXPECT_EQ(rs.parse_failures, 1u);
  ASSERT_EQ(rs.dedup.groups.size(), 1u);
  EXPECT_EQ(rs.dedup.groups[0].record_ids, (std::vector<std::string> {"m1", "m3", "m4"}));
  std::set<std::string> reps;
  for (std::size_t i = 0; i < rs.unique_count(); ++i)
    reps.insert(rs.representative(i).record_id);
  EXPECT_EQ(reps, (std::set<std::string> {"m1", "m2"}));
  EXPECT_EQ(rs.duplicate_records(), 2u);
}

TEST(Dedup, Idempotent) {
  std::vector<data::MoleculeRecord> recs;
  for (const auto &[id, smi]: std::vector<std::pair<std::string, std::string>> {
           {"a", "CCO"}, {"b", "OCC"}, {"c", "c1ccccc1"}, {"d", "C1=CC=CC=C1"}, {"e", "N"}})
    recs.push_back(data::make_record(id, smi, SplitRole::kQuery, "T"));
  const auto first = data::dedup(recs);
  EXPECT_EQ(first.groups.size(), 2u);
  std::vector<data::MoleculeRecord> unique;
  for (const std::size_t i: first.unique)
    unique.push_back(recs[i]);
  const auto second = data::dedup(unique);
  EXPECT_TRUE(second.groups.empty());
  EXPECT_EQ(second.unique.size(), unique.size());
}

TEST(Dedup, IsLossless) {
  // unique + duplicates + failures accounts for every record, and every id
  // appears in exactly one dedup_map entry.
  TempDir d;
  const auto bench = leakaudit::testing::write_planted_benchmark(d.path(), 5, 1);
  const auto b = data::load_manifest(bench.manifest);
  std::size_t records = 0;
  std::size_t failures = 0;
  for (const auto &t: b.targets) {
    for (const SplitRole r: data::kAllRoles) {
      const auto &rs = t.role(r);
      EXPECT_EQ(rs.unique_count() + rs.duplicate_records() + rs.parse_failures, rs.records.size());
      std::set<std::string> seen;
      for (const auto &[canon, idlist]: rs.dedup_map) {
        EXPECT_TRUE(std::ranges::is_sorted(idlist));
        for (const auto &id: idlist)
          EXPECT_TRUE(seen.insert(id).second) << id;
      }
      EXPECT_EQ(seen.size(), rs.records.size() - rs.parse_failures);
      records += rs.records.size();
      failures += rs.parse_failures;
    }
  }
  EXPECT_EQ(records, bench.records);
  EXPECT_EQ(failures, bench.parse_failures);
}

TEST(Manifest, LoadsAndResolvesRelativePaths) {
  TempDir d;
  write_target(d, "A");
  auto m = one_target_manifest();
  m["fingerprint"] = {{"radius", 2}, {"n_bits", 1024}};
  const auto b = data::load_manifest(write_manifest(d, m));
  ASSERT_EQ(b.targets.size(), 1u);
  EXPECT_EQ(b.params, (leakaudit::fp::FingerprintParams {2, 1024}));
  EXPECT_EQ(b.targets[0].role(SplitRole::kQuery).records[0].record_id, "LIG@1ABC");
  EXPECT_EQ(b.targets[0].role(SplitRole::kValInactive).records[0].record_id, "vi1");
  EXPECT_EQ(b.targets[0].role(SplitRole::kTrainActive).records[0].fingerprint->n_bits(), 1024);

  data::ManifestOptions o;
  o.n_bits = 2048;
  o.radius = 1;
  const auto b2 = data::load_manifest(d.path() / "manifest.json", o);
  EXPECT_EQ(b2.params, (leakaudit::fp::FingerprintParams {1, 2048}));
}

TEST(Manifest, RoleObjectsSelectFormat) {
  TempDir d;
  write_target(d, "A");
  d.write("A/q.smi", "CCO qq\n");
  auto m = one_target_manifest();
  m["targets"][0]["query"] = {{"path", "A/q.smi"}, {"format", "smi"}};
  const auto b = data::load_manifest(write_manifest(d, m));
  EXPECT_EQ(b.targets[0].role(SplitRole::kQuery).records[0].record_id, "qq");
}

TEST(Manifest, Errors) {
  TempDir d;
  write_target(d, "A");

  auto m = one_target_manifest();
  m["schema_version"] = 2;
  EXPECT_NE(manifest_error(write_manifest(d, m)).find("schema_version"), std::string::npos);

  m = one_target_manifest();
  m["extra"] = 1;
  EXPECT_NE(manifest_error(write_manifest(d, m)).find("extra"), std::string::npos);

  m = one_target_manifest();
  m["targets"].push_back(target_json("A"));
  EXPECT_NE(manifest_error(write_manifest(d, m)).find("duplicate"), std::string::npos);

  m = one_target_manifest();
  m["targets"][0].erase("val_active");
  const std::string missing = manifest_error(write_manifest(d, m));
  EXPECT_NE(missing.find("'A'"), std::string::npos);
  EXPECT_NE(missing.find("val_active"), std::string::npos);

  m = one_target_manifest();
  m["targets"][0]["train_inactive"] = "A/none.smi";
  const std::string nofile = manifest_error(write_manifest(d, m));
  EXPECT_NE(nofile.find("train_inactive"), std::string::npos);

  m = one_target_manifest();
  m["fingerprint"] = {{"radius", 1}, {"n_bits", 1000}};
  manifest_error(write_manifest(d, m));

  m = one_target_manifest();
  m["targets"][0]["query"] = {{"path", "A/q.txt"}, {"format", "sdf"}};
  manifest_error(write_manifest(d, m));

  EXPECT_THROW(data::load_manifest(d.write("bad.json", "{ not json")), data::ManifestError);
  EXPECT_THROW(data::load_manifest(d.path() / "absent.json"), data::ManifestError);
}

TEST(Manifest, EmptyQueryNeedsExplicitFlag) {
  TempDir d;
  write_target(d, "A");
  d.write("A/q.txt", "# nothing\n");
  auto m = one_target_manifest();
  EXPECT_NE(manifest_error(write_manifest(d, m)).find("query"), std::string::npos);
  m["targets"][0]["allow_empty_query"] = true;
  const auto b = data::load_manifest(write_manifest(d, m));
  EXPECT_TRUE(b.targets[0].role(SplitRole::kQuery).records.empty());
  EXPECT_FALSE(b.warnings.empty());
}

TEST(Serialize, DeterministicAcrossThreadCounts) {
  TempDir d;
  const auto bench = leakaudit::testing::write_planted_benchmark(d.path(), 9, 2);
  const std::string one = data::serialize_state(data::load_manifest(bench.manifest));
  data::ManifestOptions o;
  o.threads = 4;
  EXPECT_EQ(data::serialize_state(data::load_manifest(bench.manifest, o)), one);
  const auto j = nlohmann::json::parse(one);
  EXPECT_TRUE(j.is_object());
}
