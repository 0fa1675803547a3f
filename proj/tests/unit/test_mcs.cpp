//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "leakaudit/chem/smiles.hpp"
#include "leakaudit/sim/mcs.hpp"
#include "molgen.hpp"
#include "oracles.hpp"

namespace chem = leakaudit::chem;
namespace sim = leakaudit::sim;
namespace lt = leakaudit::testing;

namespace {

chem::Molecule mol(std::string_view s) { return chem::parse_smiles(s); }

// Checks that a reported mapping is a connected common induced subgraph
// under the matching rules, independently of the search.
void expect_valid_mapping(const chem::Molecule &a, const chem::Molecule &b,
                          const sim::McsResult &r) {
  ASSERT_EQ(static_cast<int>(r.mapping.size()), r.mcs_atom_count);
  std::set<int> ua;
  std::set<int> ub;
  for (const auto &[x, y]: r.mapping) {
    ASSERT_TRUE(ua.insert(x).second);
    ASSERT_TRUE(ub.insert(y).second);
    ASSERT_EQ(a.atom(x).atomic_number, b.atom(y).atomic_number);
    ASSERT_EQ(a.atom(x).aromatic, b.atom(y).aromatic);
  }
  for (const auto &[x1, y1]: r.mapping) {
    for (const auto &[x2, y2]: r.mapping) {
      if (x1 >= x2)
        continue;
      const int ba = a.find_bond(x1, x2);
      const int bb = b.find_bond(y1, y2);
      ASSERT_EQ(ba < 0, bb < 0);
      if (ba >= 0)
        ASSERT_EQ(a.bond(ba).order, b.bond(bb).order);
    }
  }
  if (r.mapping.empty())
    return;
  std::set<int> seen = {r.mapping.front().first};
  std::vector<int> stack = {r.mapping.front().first};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const chem::Neighbor &nb: a.neighbors(u)) {
      if (ua.count(nb.atom) && seen.insert(nb.atom).second)
        stack.push_back(nb.atom);
    }
  }
  ASSERT_EQ(seen.size(), ua.size()) << "mapped subgraph is disconnected";
}

}  // namespace

TEST(Mcs, Examples) {
  const auto r = sim::mcs_ratio(mol("CC"), mol("CCC"));
  EXPECT_EQ(r.mcs_atom_count, 2);
  EXPECT_DOUBLE_EQ(r.ratio, 2.0 / 3.0);
  EXPECT_TRUE(r.exact);

  const auto self = sim::mcs_ratio(mol("c1ccccc1O"), mol("Oc1ccccc1"));
  EXPECT_EQ(self.mcs_atom_count, 7);
  EXPECT_DOUBLE_EQ(self.ratio, 1.0);

  EXPECT_EQ(sim::mcs_ratio(mol("C"), mol("O")).mcs_atom_count, 0);
  // Aromatic and aliphatic carbons never match.
  EXPECT_EQ(sim::mcs_ratio(mol("c1ccccc1"), mol("C1CCCCC1")).mcs_atom_count, 0);
  // Induced: a ring closure present in only one molecule breaks one edge,
  // so cyclohexane and hexane share a five-atom path.
  EXPECT_EQ(sim::mcs_ratio(mol("C1CCCCC1"), mol("CCCCCC")).mcs_atom_count, 5);
  // Bond orders must agree.
  EXPECT_EQ(sim::mcs_ratio(mol("C=CC"), mol("CCC")).mcs_atom_count, 2);
  // Connected: two separate matches do not add up.
  EXPECT_EQ(sim::mcs_ratio(mol("OCCCCN"), mol("OC.NC")).mcs_atom_count, 2);
}

TEST(Mcs, MatchesBruteForceOracle) {
  lt::Rng rng(61);
  lt::GenOptions small;
  small.min_atoms = 6;
  small.max_atoms = 10;
  small.dot_prob = 0.0;
  small.charge_prob = 0.0;
  lt::GenOptions big = small;
  big.min_atoms = 8;
  big.max_atoms = 14;
  int nontrivial = 0;
  for (int t = 0; t < 150; ++t) {
    const chem::Molecule a = mol(lt::write_plain_smiles(lt::random_molecule(rng, small)));
    const chem::Molecule b = mol(lt::write_plain_smiles(lt::random_molecule(rng, big)));
    const auto r = sim::mcs_ratio(a, b);
    ASSERT_TRUE(r.exact);
    ASSERT_EQ(r.mcs_atom_count, lt::brute_mcs(a, b))
        << lt::write_plain_smiles(lt::random_molecule(rng, small));
    expect_valid_mapping(a, b, r);
    ASSERT_DOUBLE_EQ(r.ratio, static_cast<double>(r.mcs_atom_count) /
                                  std::max(a.atom_count(), b.atom_count()));
    nontrivial += r.mcs_atom_count >= 3;
  }
  EXPECT_GE(nontrivial, 30);
}

TEST(Mcs, SymmetricAndIdentityIsOne) {
  lt::Rng rng(71);
  for (int t = 0; t < 60; ++t) {
    const chem::Molecule a = mol(lt::write_plain_smiles(lt::random_molecule(rng)));
    const chem::Molecule b = mol(lt::write_plain_smiles(lt::random_molecule(rng)));
    const auto ab = sim::mcs_ratio(a, b);
    const auto ba = sim::mcs_ratio(b, a);
    ASSERT_EQ(ab.mcs_atom_count, ba.mcs_atom_count);
    const auto aa = sim::mcs_ratio(a, a);
    // Identity maps every atom only when the molecule is connected.
    const std::vector<int> comp = a.components();
    if (std::ranges::all_of(comp, [](int c) { return c == 0; }))
      ASSERT_DOUBLE_EQ(aa.ratio, 1.0);
  }
}

TEST(Mcs, AddingAnAtomNeverShrinksTheCommonCore) {
  lt::Rng rng(81);
  lt::GenOptions o;
  o.dot_prob = 0.0;
  o.max_atoms = 14;
  for (int t = 0; t < 60; ++t) {
    lt::GenMol g = lt::random_molecule(rng, o);
    lt::GenMol h = g;
    if (!lt::add_methyl(h, rng))
      continue;
    const chem::Molecule a = mol(lt::write_plain_smiles(g));
    const chem::Molecule b = mol(lt::write_plain_smiles(h));
    // The parent embeds in its methylated child as an induced subgraph,
    // unless the methyl turned an aromatic atom into a different label.
    const auto r = sim::mcs_ratio(a, b);
    if (lt::induced_embedding(a, b))
      ASSERT_EQ(r.mcs_atom_count, a.atom_count());
    ASSERT_LE(r.mcs_atom_count, a.atom_count());
  }
}

TEST(Mcs, BudgetTruncationReportsLowerBound) {
  const chem::Molecule a = mol("C1CCC2CCCCC2C1CC1CCCCC1CCCCC");
  const chem::Molecule b = mol("C1CCCC2CCCC12CCC1CCCC(CCC)C1CCC");
  const auto full = sim::mcs_ratio(a, b);
  const auto cut = sim::mcs_ratio(a, b, {5});
  EXPECT_FALSE(cut.exact);
  EXPECT_LE(cut.expansions, 6u);
  EXPECT_LE(cut.mcs_atom_count, full.mcs_atom_count);
  expect_valid_mapping(a, b, cut);
}

TEST(Mcs, EmptyMolecules) {
  const chem::Molecule empty;
  EXPECT_DOUBLE_EQ(sim::mcs_ratio(empty, empty).ratio, 1.0);
  EXPECT_DOUBLE_EQ(sim::mcs_ratio(empty, mol("C")).ratio, 0.0);
}
