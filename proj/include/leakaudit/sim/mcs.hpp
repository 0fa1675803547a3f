//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "leakaudit/chem/molecule.hpp"

namespace leakaudit::sim {

struct McsOptions {
  /// Search nodes expanded before giving up and returning the best
  /// mapping found so far.
  std::uint64_t budget = 1'000'000;
};

struct McsResult {
  int mcs_atom_count = 0;
  /// mcs_atom_count / max(atom counts); 1.0 for two empty molecules.
  double ratio = 0.0;
  /// False when the budget ran out; the count is then a lower bound.
  bool exact = true;
  std::uint64_t expansions = 0;
  /// Matched (atom in a, atom in b) pairs of the best mapping found.
  std::vector<std::pair<int, int>> mapping;
};

/// Maximum connected common induced subgraph.
///
/// Atoms match when atomic number and aromatic flag agree; an induced
/// pair of atoms matches only when both are unbonded or both are bonded
/// with the same order (aromatic matches only aromatic). Branch and bound
/// over label-class domains (McSplit style) restricted to extensions
/// adjacent to the current mapping, so the common subgraph is connected.
McsResult mcs_ratio(const chem::Molecule &a, const chem::Molecule &b,
                    const McsOptions &options = {});

}  // namespace leakaudit::sim
