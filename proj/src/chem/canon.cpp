//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/chem/canon.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "leakaudit/chem/element.hpp"
#include "leakaudit/chem/smiles.hpp"

namespace leakaudit::chem {
namespace {

std::string bond_symbol(const Molecule &mol, int bond) {
  const Bond &b = mol.bond(bond);
  switch (b.order) {
  case BondOrder::kSingle:
    return (mol.atom(b.a).aromatic && mol.atom(b.b).aromatic) ? "-" : "";
  case BondOrder::kDouble:
    return "=";
  case BondOrder::kTriple:
    return "#";
  case BondOrder::kAromatic:
    return mol.is_ring_bond(bond) ? "" : ":";
  }
  return "";
}

bool has_aromatic_symbol(int z) {
  switch (z) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 15:
  case 16:
  case 33:
  case 34:
    return true;
  default:
    return false;
  }
}

std::string atom_token(const Molecule &mol, int i) {
  const Atom &a = mol.atom(i);
  std::string sym(element_symbol(a.atomic_number));
  if (a.aromatic && has_aromatic_symbol(a.atomic_number))
    sym[0] = static_cast<char>(sym[0] - 'A' + 'a');

  const bool organic_symbol =
      is_organic_subset(a.atomic_number) &&
      (!a.aromatic || a.atomic_number != 9);
  if (organic_symbol && !a.isotope && a.formal_charge == 0) {
    const auto h =
        organic_implicit_h(a.atomic_number, a.aromatic, mol.bond_valence(i));
    if (h && *h == a.implicit_h)
      return sym;
  }

  std::string out = "[";
  if (a.isotope)
    out += std::to_string(*a.isotope);
  out += sym;
  if (a.implicit_h > 0) {
    out += 'H';
    if (a.implicit_h > 1)
      out += std::to_string(a.implicit_h);
  }
  if (a.formal_charge != 0) {
    out += a.formal_charge > 0 ? '+' : '-';
    const int mag = std::abs(a.formal_charge);
    if (mag > 1)
      out += std::to_string(mag);
  }
  out += ']';
  return out;
}

std::string ring_label(int d) {
  if (d < 10)
    return std::to_string(d);
  if (d < 100)
    return "%" + std::to_string(d);
  return "%(" + std::to_string(d) + ")";
}

class Writer {
public:
  Writer(const Molecule &mol, std::span<const int> rank)
      : mol_(mol), rank_(rank), n_(mol.atom_count()) {
    if (rank.size() != static_cast<std::size_t>(n_))
      throw GraphError("ranking size does not match atom count");
    sorted_nbrs_.resize(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) {
      auto &v = sorted_nbrs_[static_cast<std::size_t>(u)];
      v.assign(mol.neighbors(u).begin(), mol.neighbors(u).end());
      std::ranges::sort(v, {}, [&](const Neighbor &nb) { return rank_[static_cast<std::size_t>(nb.atom)]; });
    }
  }

  std::string run() {
    std::vector<int> order(static_cast<std::size_t>(n_));
    std::iota(order.begin(), order.end(), 0);
    std::ranges::sort(order, {}, [&](int a) { return rank_[static_cast<std::size_t>(a)]; });

    visited_.assign(static_cast<std::size_t>(n_), 0);
    classified_.assign(static_cast<std::size_t>(mol_.bond_count()), 0);
    children_.assign(static_cast<std::size_t>(n_), {});
    opens_.assign(static_cast<std::size_t>(n_), {});
    closes_.assign(static_cast<std::size_t>(n_), {});
    std::vector<int> roots;
    for (const int s: order) {
      if (visited_[static_cast<std::size_t>(s)])
        continue;
      roots.push_back(s);
      classify(s, -1);
    }

    digit_of_bond_.assign(static_cast<std::size_t>(mol_.bond_count()), 0);
    in_use_.assign(1, 1);  // digit 0 is never used
    std::string out;
    for (std::size_t r = 0; r < roots.size(); ++r) {
      if (r > 0)
        out += '.';
      emit(out, roots[r], -1);
    }
    return out;
  }

private:
  void classify(int u, int parent_bond) {
    visited_[static_cast<std::size_t>(u)] = 1;
    for (const Neighbor &nb: sorted_nbrs_[static_cast<std::size_t>(u)]) {
      if (nb.bond == parent_bond || classified_[static_cast<std::size_t>(nb.bond)])
        continue;
      classified_[static_cast<std::size_t>(nb.bond)] = 1;
      if (visited_[static_cast<std::size_t>(nb.atom)]) {
        opens_[static_cast<std::size_t>(nb.atom)].push_back({u, nb.bond});
        closes_[static_cast<std::size_t>(u)].push_back({nb.atom, nb.bond});
      } else {
        children_[static_cast<std::size_t>(u)].push_back(nb);
        classify(nb.atom, nb.bond);
      }
    }
  }

  int take_digit() {
    for (std::size_t d = 1; d < in_use_.size(); ++d) {
      if (!in_use_[d]) {
        in_use_[d] = 1;
        return static_cast<int>(d);
      }
    }
    in_use_.push_back(1);
    return static_cast<int>(in_use_.size()) - 1;
  }

  void emit(std::string &out, int u, int parent_bond) {
    if (parent_bond >= 0)
      out += bond_symbol(mol_, parent_bond);
    out += atom_token(mol_, u);

    auto by_rank = [&](const Neighbor &nb) { return rank_[static_cast<std::size_t>(nb.atom)]; };
    auto &closes = closes_[static_cast<std::size_t>(u)];
    std::ranges::sort(closes, {}, by_rank);
    for (const Neighbor &nb: closes) {
      const int d = digit_of_bond_[static_cast<std::size_t>(nb.bond)];
      out += ring_label(d);
      in_use_[static_cast<std::size_t>(d)] = 0;
    }
    auto &opens = opens_[static_cast<std::size_t>(u)];
    std::ranges::sort(opens, {}, by_rank);
    for (const Neighbor &nb: opens) {
      const int d = take_digit();
      digit_of_bond_[static_cast<std::size_t>(nb.bond)] = d;
      out += bond_symbol(mol_, nb.bond);
      out += ring_label(d);
    }

    const auto &kids = children_[static_cast<std::size_t>(u)];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      if (!last)
        out += '(';
      emit(out, kids[i].atom, kids[i].bond);
      if (!last)
        out += ')';
    }
  }

  const Molecule &mol_;
  std::span<const int> rank_;
  int n_;
  std::vector<std::vector<Neighbor>> sorted_nbrs_;
  std::vector<std::uint8_t> visited_;
  std::vector<std::uint8_t> classified_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<Neighbor>> opens_;
  std::vector<std::vector<Neighbor>> closes_;
  std::vector<int> digit_of_bond_;
  std::vector<std::uint8_t> in_use_;
};

// Individualization-refinement search over one connected molecule. The
// set of leaves it visits depends only on the graph, so the smallest leaf
// serialization is a canonical form.
class Canonicalizer {
public:
  explicit Canonicalizer(const Molecule &mol): mol_(mol), n_(mol.atom_count()) {
    nbr_.resize(static_cast<std::size_t>(n_));
    for (int u = 0; u < n_; ++u) {
      for (const Neighbor &nb: mol.neighbors(u))
        nbr_[static_cast<std::size_t>(u)].push_back(
            {nb.atom, static_cast<int>(mol.bond(nb.bond).order)});
      std::ranges::sort(nbr_[static_cast<std::size_t>(u)]);
    }
  }

  std::string run() {
    if (n_ == 0)
      return {};
    std::vector<std::vector<std::int64_t>> keys(static_cast<std::size_t>(n_));
    for (int i = 0; i < n_; ++i) {
      const Atom &a = mol_.atom(i);
      keys[static_cast<std::size_t>(i)] = {
          a.atomic_number, a.formal_charge, a.isotope.value_or(-1),
          a.aromatic ? 1 : 0, a.implicit_h, mol_.degree(i)};
    }
    std::vector<int> colors = dense_rank(keys);
    search(refine(std::move(colors)));
    return std::move(*best_);
  }

private:
  static std::vector<int> dense_rank(const std::vector<std::vector<std::int64_t>> &keys) {
    std::vector<int> idx(keys.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::ranges::sort(idx, [&](int x, int y) {
      return keys[static_cast<std::size_t>(x)] < keys[static_cast<std::size_t>(y)];
    });
    std::vector<int> colors(keys.size());
    int c = 0;
    for (std::size_t i = 0; i < idx.size(); ++i) {
      if (i > 0 && keys[static_cast<std::size_t>(idx[i])] !=
                       keys[static_cast<std::size_t>(idx[i - 1])])
        ++c;
      colors[static_cast<std::size_t>(idx[i])] = c;
    }
    return colors;
  }

  static int distinct(const std::vector<int> &colors) {
    return colors.empty() ? 0 : *std::ranges::max_element(colors) + 1;
  }

  std::vector<int> refine(std::vector<int> colors) const {
    int count = distinct(colors);
    std::vector<std::vector<std::int64_t>> keys(static_cast<std::size_t>(n_));
    while (count < n_) {
      for (int u = 0; u < n_; ++u) {
        auto &k = keys[static_cast<std::size_t>(u)];
        k.clear();
        k.push_back(colors[static_cast<std::size_t>(u)]);
        std::vector<std::int64_t> env;
        for (const auto &[v, order]: nbr_[static_cast<std::size_t>(u)])
          env.push_back(static_cast<std::int64_t>(order) * (n_ + 1) +
                        colors[static_cast<std::size_t>(v)]);
        std::ranges::sort(env);
        k.insert(k.end(), env.begin(), env.end());
      }
      auto next = dense_rank(keys);
      const int next_count = distinct(next);
      colors = std::move(next);
      if (next_count == count)
        break;
      count = next_count;
    }
    return colors;
  }

  // Swapping twins is an automorphism that fixes every other atom.
  bool twins(int u, int v) const {
    auto strip = [&](int self, int other) {
      std::vector<std::pair<int, int>> out;
      for (const auto &p: nbr_[static_cast<std::size_t>(self)]) {
        if (p.first != other)
          out.push_back(p);
      }
      return out;
    };
    if (mol_.atom(u) != mol_.atom(v))
      return false;
    return strip(u, v) == strip(v, u);
  }

  void search(std::vector<int> colors) {
    if (distinct(colors) == n_) {
      std::string s = Writer(mol_, colors).run();
      if (!best_ || s < *best_)
        best_ = std::move(s);
      return;
    }

    // First non-singleton cell in color order.
    std::vector<int> size(static_cast<std::size_t>(n_), 0);
    for (const int c: colors)
      ++size[static_cast<std::size_t>(c)];
    int cell = 0;
    while (size[static_cast<std::size_t>(cell)] < 2)
      ++cell;

    std::vector<int> candidates;
    for (int v = 0; v < n_; ++v) {
      if (colors[static_cast<std::size_t>(v)] != cell)
        continue;
      const bool redundant = std::ranges::any_of(
          candidates, [&](int u) { return twins(u, v); });
      if (!redundant)
        candidates.push_back(v);
    }

    for (const int v: candidates) {
      std::vector<int> next = colors;
      for (int u = 0; u < n_; ++u) {
        int &c = next[static_cast<std::size_t>(u)];
        if (c > cell || (c == cell && u != v))
          ++c;
      }
      search(refine(std::move(next)));
    }
  }

  const Molecule &mol_;
  int n_;
  std::vector<std::vector<std::pair<int, int>>> nbr_;
  std::optional<std::string> best_;
};

std::vector<Molecule> split_components(const Molecule &mol) {
  const auto comp = mol.components();
  const int count =
      comp.empty() ? 0 : *std::ranges::max_element(comp) + 1;
  if (count <= 1)
    return {mol};

  std::vector<std::vector<Atom>> atoms(static_cast<std::size_t>(count));
  std::vector<std::vector<Bond>> bonds(static_cast<std::size_t>(count));
  std::vector<int> local(comp.size());
  for (int i = 0; i < mol.atom_count(); ++i) {
    auto &dst = atoms[static_cast<std::size_t>(comp[static_cast<std::size_t>(i)])];
    local[static_cast<std::size_t>(i)] = static_cast<int>(dst.size());
    dst.push_back(mol.atom(i));
  }
  for (const Bond &b: mol.bonds()) {
    bonds[static_cast<std::size_t>(comp[static_cast<std::size_t>(b.a)])].push_back(
        {local[static_cast<std::size_t>(b.a)], local[static_cast<std::size_t>(b.b)],
         b.order});
  }
  std::vector<Molecule> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c)
    out.emplace_back(std::move(atoms[static_cast<std::size_t>(c)]),
                     std::move(bonds[static_cast<std::size_t>(c)]));
  return out;
}

}  // namespace

std::string write_smiles(const Molecule &mol, std::span<const int> rank) {
  return Writer(mol, rank).run();
}

CanonicalSmiles canonical_smiles(const Molecule &mol) {
  std::vector<std::string> parts;
  for (const Molecule &component: split_components(mol))
    parts.push_back(Canonicalizer(component).run());
  std::ranges::sort(parts);

  CanonicalSmiles out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0)
      out.text += '.';
    out.text += parts[i];
  }
  return out;
}

bool same_molecule(const Molecule &a, const Molecule &b) {
  return canonical_smiles(a) == canonical_smiles(b);
}

}  // namespace leakaudit::chem
