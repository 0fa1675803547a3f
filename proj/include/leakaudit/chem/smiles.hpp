//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "leakaudit/chem/molecule.hpp"

namespace leakaudit::chem {

class ParseError: public std::runtime_error {
public:
  ParseError(std::size_t offset, std::string reason);

  /// Byte offset into the input text where the problem was detected.
  std::size_t offset() const { return offset_; }
  const std::string &reason() const { return reason_; }

private:
  std::size_t offset_;
  std::string reason_;
};

/// Parses a SMILES string into a normalized molecule.
///
/// Supported: organic-subset atoms (B C N O P S F Cl Br I and aromatic
/// b c n o p s), bracket atoms with isotope, charge, hydrogen count and
/// atom class, branches, ring closures (digits, %nn and %(n)), dot
/// separated components and the bond symbols - = # : / \. Stereo
/// markers are accepted and dropped.
///
/// Normalization strips stereo, folds plain explicit hydrogens into
/// their heavy neighbor, assigns implicit hydrogens from the default
/// valence table and aromatizes alternating six-membered C/N/O/S rings.
/// Anything the valence model cannot explain is a ParseError rather than
/// a guess.
Molecule parse_smiles(std::string_view text);

/// Implicit hydrogen count the parser assigns to an unbracketed atom with
/// the given bond valence, or nullopt when the valence is impossible.
std::optional<int> organic_implicit_h(int atomic_number, bool aromatic,
                                      int bond_valence);

}  // namespace leakaudit::chem
