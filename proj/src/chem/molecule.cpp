//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/chem/molecule.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

#include "leakaudit/chem/element.hpp"

namespace leakaudit::chem {
namespace {

// Bridges via iterative Tarjan low-link; everything else is a ring bond.
std::vector<std::uint8_t> find_ring_bonds(int n, const std::vector<Bond> &bonds,
                                          const std::vector<std::size_t> &off,
                                          const std::vector<Neighbor> &adj) {
  std::vector<std::uint8_t> ring(bonds.size(), 1);
  std::vector<int> disc(static_cast<std::size_t>(n), -1);
  std::vector<int> low(static_cast<std::size_t>(n), 0);
  int timer = 0;

  struct Frame {
    int atom;
    int parent_bond;
    std::size_t next;
  };
  std::vector<Frame> stack;

  for (int root = 0; root < n; ++root) {
    if (disc[static_cast<std::size_t>(root)] >= 0)
      continue;
    disc[static_cast<std::size_t>(root)] = low[static_cast<std::size_t>(root)] =
        timer++;
    stack.push_back({root, -1, off[static_cast<std::size_t>(root)]});
    while (!stack.empty()) {
      Frame &f = stack.back();
      const auto u = static_cast<std::size_t>(f.atom);
      if (f.next < off[u + 1]) {
        const Neighbor nb = adj[f.next++];
        if (nb.bond == f.parent_bond)
          continue;
        const auto v = static_cast<std::size_t>(nb.atom);
        if (disc[v] < 0) {
          disc[v] = low[v] = timer++;
          stack.push_back({nb.atom, nb.bond, off[v]});
        } else {
          low[u] = std::min(low[u], disc[v]);
        }
        continue;
      }
      const int done = f.atom;
      const int via = f.parent_bond;
      stack.pop_back();
      if (!stack.empty()) {
        const auto p = static_cast<std::size_t>(stack.back().atom);
        const auto d = static_cast<std::size_t>(done);
        low[p] = std::min(low[p], low[d]);
        if (low[d] > disc[p])
          ring[static_cast<std::size_t>(via)] = 0;
      }
    }
  }
  return ring;
}

}  // namespace

Molecule::Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds,
                   std::optional<std::string> source_id)
    : atoms_(std::move(atoms)), bonds_(std::move(bonds)),
      source_id_(std::move(source_id)) {
  const int n = atom_count();
  for (const Atom &a: atoms_) {
    if (a.atomic_number < 1 || a.atomic_number > kMaxAtomicNumber)
      throw GraphError("atomic number out of range: " +
                       std::to_string(a.atomic_number));
    if (a.implicit_h < 0)
      throw GraphError("negative hydrogen count");
  }

  std::set<std::pair<int, int>> seen;
  std::vector<int> deg(static_cast<std::size_t>(n), 0);
  for (const Bond &b: bonds_) {
    if (b.a < 0 || b.b < 0 || b.a >= n || b.b >= n)
      throw GraphError("bond references a missing atom");
    if (b.a == b.b)
      throw GraphError("self-loop bond on atom " + std::to_string(b.a));
    if (!seen.emplace(std::minmax(b.a, b.b)).second)
      throw GraphError("duplicate bond between atoms " + std::to_string(b.a) +
                       " and " + std::to_string(b.b));
    ++deg[static_cast<std::size_t>(b.a)];
    ++deg[static_cast<std::size_t>(b.b)];
  }

  adj_offsets_.assign(static_cast<std::size_t>(n) + 1, 0);
  for (int i = 0; i < n; ++i)
    adj_offsets_[static_cast<std::size_t>(i) + 1] =
        adj_offsets_[static_cast<std::size_t>(i)] +
        static_cast<std::size_t>(deg[static_cast<std::size_t>(i)]);
  adj_.resize(adj_offsets_.back());
  std::vector<std::size_t> fill(adj_offsets_.begin(), adj_offsets_.end() - 1);
  for (int bi = 0; bi < bond_count(); ++bi) {
    const Bond &b = bonds_[static_cast<std::size_t>(bi)];
    adj_[fill[static_cast<std::size_t>(b.a)]++] = {b.b, bi};
    adj_[fill[static_cast<std::size_t>(b.b)]++] = {b.a, bi};
  }
  ring_bond_ = find_ring_bonds(n, bonds_, adj_offsets_, adj_);
}

int Molecule::find_bond(int a, int b) const {
  for (const Neighbor &nb: neighbors(a)) {
    if (nb.atom == b)
      return nb.bond;
  }
  return -1;
}

bool Molecule::is_ring_atom(int atom) const {
  return std::ranges::any_of(neighbors(atom), [this](const Neighbor &nb) {
    return is_ring_bond(nb.bond);
  });
}

int Molecule::bond_valence(int atom) const {
  int sum = 0;
  for (const Neighbor &nb: neighbors(atom))
    sum += valence_contribution(bond(nb.bond).order);
  return sum;
}

std::vector<int> Molecule::components() const {
  std::vector<int> comp(atoms_.size(), -1);
  int next = 0;
  std::vector<int> queue;
  for (int s = 0; s < atom_count(); ++s) {
    if (comp[static_cast<std::size_t>(s)] >= 0)
      continue;
    comp[static_cast<std::size_t>(s)] = next;
    queue.assign(1, s);
    while (!queue.empty()) {
      const int u = queue.back();
      queue.pop_back();
      for (const Neighbor &nb: neighbors(u)) {
        if (comp[static_cast<std::size_t>(nb.atom)] < 0) {
          comp[static_cast<std::size_t>(nb.atom)] = next;
          queue.push_back(nb.atom);
        }
      }
    }
    ++next;
  }
  return comp;
}

Molecule permute_atoms(const Molecule &mol, std::span<const int> perm) {
  if (perm.size() != mol.atoms().size())
    throw GraphError("permutation size mismatch");
  std::vector<Atom> atoms(mol.atoms().size());
  for (int i = 0; i < mol.atom_count(); ++i)
    atoms[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] =
        mol.atom(i);
  std::vector<Bond> bonds;
  bonds.reserve(mol.bonds().size());
  for (const Bond &b: mol.bonds())
    bonds.push_back({perm[static_cast<std::size_t>(b.a)],
                     perm[static_cast<std::size_t>(b.b)], b.order});
  return Molecule(std::move(atoms), std::move(bonds), mol.source_id());
}

}  // namespace leakaudit::chem
