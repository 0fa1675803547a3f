//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "planted.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/fp/fingerprint.hpp"
#include "molgen.hpp"

namespace leakaudit::testing {
namespace {

constexpr double kDissimilar = 0.45;
constexpr double kAnalog = 0.62;

double word_tanimoto(const fp::Fingerprint &a, const fp::Fingerprint &b) {
  int both = 0;
  int either = 0;
  for (std::size_t w = 0; w < a.words().size(); ++w) {
    both += std::popcount(a.words()[w] & b.words()[w]);
    either += std::popcount(a.words()[w] | b.words()[w]);
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / either;
}

class Planter {
public:
  explicit Planter(std::uint64_t seed) : rng_(seed) {
    opts_.min_atoms = 12;
    opts_.max_atoms = 22;
    opts_.dot_prob = 0.0;
    opts_.charge_prob = 0.03;
    opts_.isotope_prob = 0.02;
    opts_.aromatic_prob = 0.35;
  }

  Rng &rng() { return rng_; }

  GenMol fresh() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      GenMol g = random_molecule(rng_, opts_);
      if (g.size() < 10)
        continue;
      fp::Fingerprint f = fingerprint(g);
      if (!dissimilar(f))
        continue;
      placed_.push_back(std::move(f));
      return g;
    }
    throw std::runtime_error("could not find a dissimilar molecule");
  }

  std::pair<GenMol, GenMol> analog_pair() {
    for (int attempt = 0; attempt < 100000; ++attempt) {
      GenMol g = random_molecule(rng_, opts_);
      if (g.size() < 10)
        continue;
      GenMol h = g;
      if (!add_methyl(h, rng_))
        continue;
      fp::Fingerprint fg = fingerprint(g);
      fp::Fingerprint fh = fingerprint(h);
      if (word_tanimoto(fg, fh) < kAnalog || !dissimilar(fg) || !dissimilar(fh))
        continue;
      placed_.push_back(std::move(fg));
      placed_.push_back(std::move(fh));
      return {g, h};
    }
    throw std::runtime_error("could not build an analog pair");
  }

private:
  fp::Fingerprint fingerprint(const GenMol &g) const {
    return fp::ecfp(chem::parse_smiles(write_plain_smiles(g)), {1, 4096});
  }

  bool dissimilar(const fp::Fingerprint &f) const {
    return std::ranges::all_of(placed_, [&](const fp::Fingerprint &p) {
      return word_tanimoto(f, p) < kDissimilar;
    });
  }

  Rng rng_;
  GenOptions opts_;
  std::vector<fp::Fingerprint> placed_;
};

enum Role { kQ, kTA, kTI, kVA, kVI };
constexpr const char *kRoleNames[] = {"query", "train_active", "train_inactive",
                                      "val_active", "val_inactive"};

struct TargetFiles {
  std::vector<std::string> lines[5];
  int next_id = 0;

  void add(Role role, const std::string &smiles, const std::string &tag) {
    char id[64];
    if (role == kQ) {
      std::snprintf(id, sizeof id, "P%03d L%02d", next_id, next_id);
      lines[role].push_back(std::string(id) + " " + smiles);
    } else {
      std::snprintf(id, sizeof id, "%s_%04d", tag.c_str(), next_id);
      lines[role].push_back(smiles + " " + id);
    }
    ++next_id;
  }
};

void write_lines(const std::filesystem::path &path, const std::vector<std::string> &lines,
                 const std::string &header) {
  std::ofstream out(path);
  if (!out)
    throw std::runtime_error("cannot write " + path.string());
  out << header << "\n";
  for (const std::string &l: lines)
    out << l << "\n";
}

}  // namespace

PlantedBenchmark write_planted_benchmark(const std::filesystem::path &dir,
                                         std::uint64_t seed, int targets,
                                         const PlantSpec &spec) {
  std::filesystem::create_directories(dir);
  Planter p(seed);
  PlantedBenchmark out;
  nlohmann::ordered_json manifest;
  manifest["schema_version"] = 1;
  manifest["fingerprint"] = {{"radius", 1}, {"n_bits", 4096}};
  manifest["targets"] = nlohmann::ordered_json::array();

  for (int t = 0; t < targets; ++t) {
    const std::string name = "T" + std::to_string(t + 1);
    TargetFiles files;
    auto put = [&](Role r, const GenMol &g, const std::string &tag) {
      files.add(r, write_random_smiles(g, p.rng()), tag);
    };

    for (int i = 0; i < spec.query_background; ++i)
      put(kQ, p.fresh(), "q");
    for (int i = 0; i < spec.query_train_leaks; ++i) {
      const GenMol g = p.fresh();
      put(kQ, g, "q");
      put(kTA, g, "leak");
    }
    for (int i = 0; i < spec.query_val_leaks; ++i) {
      const GenMol g = p.fresh();
      put(kQ, g, "q");
      put(kVA, g, "leak");
    }
    for (int i = 0; i < spec.intra_analog_pairs; ++i) {
      const auto [g, h] = p.analog_pair();
      put(kQ, g, "q");
      put(kQ, h, "q");
    }
    for (int i = 0; i < spec.inter_analog_pairs; ++i) {
      const auto [g, h] = p.analog_pair();
      put(kTA, g, "ana");
      put(kVA, h, "ana");
    }
    for (int i = 0; i < spec.shared_inactives; ++i) {
      const GenMol g = p.fresh();
      put(kTI, g, "shared");
      put(kVI, g, "shared");
    }
    static constexpr Role kDupRoles[] = {kTI, kVI, kQ, kTA};
    std::size_t dup_count[5] = {};
    for (int i = 0; i < spec.intra_identity_groups; ++i) {
      const Role r = kDupRoles[i % 4];
      const GenMol g = p.fresh();
      put(r, g, "dup");
      put(r, g, "dup");
      ++dup_count[r];
    }
    for (int i = 0; i < spec.train_active_background; ++i)
      put(kTA, p.fresh(), "ta");
    for (int i = 0; i < spec.train_inactive_background; ++i)
      put(kTI, p.fresh(), "ti");
    for (int i = 0; i < spec.val_active_background; ++i)
      put(kVA, p.fresh(), "va");
    for (int i = 0; i < spec.val_inactive_background; ++i)
      put(kVI, p.fresh(), "vi");
    files.lines[kVI].push_back("C1CC(=O broken_" + name);
    ++out.parse_failures;

    const std::filesystem::path tdir = dir / name;
    std::filesystem::create_directories(tdir);
    nlohmann::ordered_json tj;
    tj["name"] = name;
    for (int r = 0; r < 5; ++r) {
      std::ranges::shuffle(files.lines[r], p.rng());
      out.records += files.lines[r].size();
      const std::string file = std::string(kRoleNames[r]) + (r == kQ ? ".txt" : ".smi");
      write_lines(tdir / file, files.lines[r], "# planted " + std::string(kRoleNames[r]));
      if (r == kQ)
        tj["query"] = {{"path", name + "/" + file}, {"format", "query_table"}};
      else
        tj[kRoleNames[r]] = name + "/" + file;
    }
    manifest["targets"].push_back(std::move(tj));

    auto &e = out.expected[name];
    e["inter_identity"]["query|train_active"] = static_cast<std::size_t>(spec.query_train_leaks);
    e["inter_identity"]["query|val_active"] = static_cast<std::size_t>(spec.query_val_leaks);
    e["inter_identity"]["train_inactive|val_inactive"] = static_cast<std::size_t>(spec.shared_inactives);
    e["inter_identity"]["train_active|val_active"] = 0;
    e["inter_analog"]["train_active|val_active"] = static_cast<std::size_t>(spec.inter_analog_pairs);
    for (int r = 0; r < 5; ++r)
      e["intra_identity"][kRoleNames[r]] = dup_count[r];
    e["intra_analog"]["query"] = static_cast<std::size_t>(spec.intra_analog_pairs);
  }

  out.manifest = dir / "manifest.json";
  std::ofstream m(out.manifest);
  m << manifest.dump(2) << "\n";
  return out;
}

}  // namespace leakaudit::testing
