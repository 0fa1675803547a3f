//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <compare>
#include <functional>
#include <span>
#include <string>

#include "leakaudit/chem/molecule.hpp"

namespace leakaudit::chem {

/// Identity key of a molecule. Two molecules have the same key exactly
/// when their normalized graphs are isomorphic.
struct CanonicalSmiles {
  std::string text;

  friend auto operator<=>(const CanonicalSmiles &,
                          const CanonicalSmiles &) = default;
};

/// Serializes a molecule by depth-first traversal, starting every
/// component at its lowest-ranked atom and visiting neighbors in rank
/// order. `rank` must hold distinct values, one per atom. The output
/// re-parses to an isomorphic molecule for any valid ranking.
std::string write_smiles(const Molecule &mol, std::span<const int> rank);

/// Canonical SMILES: the lexicographically smallest serialization over
/// all discrete labelings reachable by invariant refinement plus
/// individualization. Components are canonicalized independently, then
/// sorted and joined with '.'.
CanonicalSmiles canonical_smiles(const Molecule &mol);

bool same_molecule(const Molecule &a, const Molecule &b);

}  // namespace leakaudit::chem

template <>
struct std::hash<leakaudit::chem::CanonicalSmiles> {
  std::size_t operator()(const leakaudit::chem::CanonicalSmiles &s) const noexcept {
    return std::hash<std::string> {}(s.text);
  }
};
