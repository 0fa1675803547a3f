//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace leakaudit::chem {

enum class BondOrder : std::uint8_t {
  kSingle = 1,
  kDouble = 2,
  kTriple = 3,
  kAromatic = 4,
};

/// Contribution of a bond to its endpoints' valence. Aromatic bonds count
/// as one; the extra pi electron is accounted for per atom.
constexpr int valence_contribution(BondOrder order) {
  return order == BondOrder::kAromatic ? 1 : static_cast<int>(order);
}

struct Atom {
  int atomic_number = 6;
  int formal_charge = 0;
  std::optional<int> isotope;
  bool aromatic = false;
  int implicit_h = 0;

  friend bool operator==(const Atom &, const Atom &) = default;
};

struct Bond {
  int a = 0;
  int b = 0;
  BondOrder order = BondOrder::kSingle;

  int other(int atom) const { return atom == a ? b : a; }

  friend bool operator==(const Bond &, const Bond &) = default;
};

struct Neighbor {
  int atom;
  int bond;
};

class GraphError: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Hydrogen-suppressed, stereo-free molecular graph. Immutable once built;
/// the constructor validates the simple-graph invariants and precomputes
/// adjacency and ring-bond membership.
class Molecule {
public:
  Molecule() = default;
  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
           std::optional<std::string> source_id = std::nullopt);

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  bool empty() const { return atoms_.empty(); }

  const std::vector<Atom> &atoms() const { return atoms_; }
  const std::vector<Bond> &bonds() const { return bonds_; }
  const Atom &atom(int i) const { return atoms_[static_cast<std::size_t>(i)]; }
  const Bond &bond(int i) const { return bonds_[static_cast<std::size_t>(i)]; }

  std::span<const Neighbor> neighbors(int atom) const {
    const auto begin = adj_offsets_[static_cast<std::size_t>(atom)];
    const auto end = adj_offsets_[static_cast<std::size_t>(atom) + 1];
    return {adj_.data() + begin, end - begin};
  }
  int degree(int atom) const {
    return static_cast<int>(neighbors(atom).size());
  }

  /// Bond index between two atoms, or -1.
  int find_bond(int a, int b) const;

  /// True when the bond lies on at least one cycle (is not a bridge).
  bool is_ring_bond(int bond) const {
    return ring_bond_[static_cast<std::size_t>(bond)] != 0;
  }
  /// True when the atom has at least one ring bond.
  bool is_ring_atom(int atom) const;

  /// Sum of bond valence contributions at an atom.
  int bond_valence(int atom) const;

  /// Connected component id per atom; components numbered by first atom.
  std::vector<int> components() const;

  const std::optional<std::string> &source_id() const { return source_id_; }

private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::optional<std::string> source_id_;
  std::vector<std::size_t> adj_offsets_ {0};
  std::vector<Neighbor> adj_;
  std::vector<std::uint8_t> ring_bond_;
};

/// Graph-isomorphism-preserving relabeling: atom i of the input becomes
/// atom perm[i] of the output.
Molecule permute_atoms(const Molecule &mol, std::span<const int> perm);

}  // namespace leakaudit::chem
