//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace leakaudit::testing {
namespace {

// Dense bond-label matrix (0 = none, else the BondOrder value).
std::vector<int> label_matrix(const chem::Molecule &m) {
  const auto n = static_cast<std::size_t>(m.atom_count());
  std::vector<int> out(n * n, 0);
  for (const chem::Bond &b: m.bonds()) {
    out[static_cast<std::size_t>(b.a) * n + static_cast<std::size_t>(b.b)] = static_cast<int>(b.order);
    out[static_cast<std::size_t>(b.b) * n + static_cast<std::size_t>(b.a)] = static_cast<int>(b.order);
  }
  return out;
}

struct Matcher {
  const chem::Molecule &a;
  const chem::Molecule &b;
  std::vector<int> la;
  std::vector<int> lb;
  std::vector<int> order;  // atoms of a to map, in sequence
  std::vector<int> map;
  std::vector<char> used;
  bool full_labels;

  Matcher(const chem::Molecule &x, const chem::Molecule &y, std::vector<int> atoms, bool full)
      : a(x), b(y), la(label_matrix(x)), lb(label_matrix(y)), order(std::move(atoms)),
        map(static_cast<std::size_t>(x.atom_count()), -1),
        used(static_cast<std::size_t>(y.atom_count()), 0), full_labels(full) {}

  int edge_a(int u, int v) const {
    return la[static_cast<std::size_t>(u) * static_cast<std::size_t>(a.atom_count()) + static_cast<std::size_t>(v)];
  }
  int edge_b(int u, int v) const {
    return lb[static_cast<std::size_t>(u) * static_cast<std::size_t>(b.atom_count()) + static_cast<std::size_t>(v)];
  }

  bool atom_ok(int u, int w) const {
    const chem::Atom &x = a.atom(u);
    const chem::Atom &y = b.atom(w);
    if (x.atomic_number != y.atomic_number || x.aromatic != y.aromatic)
      return false;
    if (!full_labels)
      return true;
    return x.formal_charge == y.formal_charge && x.isotope == y.isotope &&
           x.implicit_h == y.implicit_h && a.degree(u) == b.degree(w);
  }

  bool extend(std::size_t depth) {
    if (depth == order.size())
      return true;
    const int u = order[depth];
    for (int w = 0; w < b.atom_count(); ++w) {
      if (used[static_cast<std::size_t>(w)] || !atom_ok(u, w))
        continue;
      bool ok = true;
      for (std::size_t d = 0; d < depth && ok; ++d) {
        const int v = order[d];
        ok = edge_a(u, v) == edge_b(w, map[static_cast<std::size_t>(v)]);
      }
      if (!ok)
        continue;
      map[static_cast<std::size_t>(u)] = w;
      used[static_cast<std::size_t>(w)] = 1;
      if (extend(depth + 1))
        return true;
      used[static_cast<std::size_t>(w)] = 0;
      map[static_cast<std::size_t>(u)] = -1;
    }
    return false;
  }
};

bool connected(const chem::Molecule &m, std::uint32_t mask) {
  if (mask == 0)
    return false;
  const int start = std::countr_zero(mask);
  std::uint32_t seen = 1U << start;
  std::vector<int> stack = {start};
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    for (const chem::Neighbor &nb: m.neighbors(u)) {
      const std::uint32_t bit = 1U << nb.atom;
      if ((mask & bit) && !(seen & bit)) {
        seen |= bit;
        stack.push_back(nb.atom);
      }
    }
  }
  return seen == mask;
}

std::vector<int> bits_of(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1) {
    if (mask & 1U)
      out.push_back(i);
  }
  return out;
}

}  // namespace

bool isomorphic(const chem::Molecule &a, const chem::Molecule &b) {
  if (a.atom_count() != b.atom_count() || a.bond_count() != b.bond_count())
    return false;
  std::vector<int> order(static_cast<std::size_t>(a.atom_count()));
  std::iota(order.begin(), order.end(), 0);
  // BFS order keeps already-mapped neighbors available for pruning.
  std::vector<int> bfs;
  std::vector<char> seen(order.size(), 0);
  for (const int s: order) {
    if (seen[static_cast<std::size_t>(s)])
      continue;
    seen[static_cast<std::size_t>(s)] = 1;
    bfs.push_back(s);
    for (std::size_t q = bfs.size() - 1; q < bfs.size(); ++q) {
      for (const chem::Neighbor &nb: a.neighbors(bfs[q])) {
        if (!seen[static_cast<std::size_t>(nb.atom)]) {
          seen[static_cast<std::size_t>(nb.atom)] = 1;
          bfs.push_back(nb.atom);
        }
      }
    }
  }
  Matcher m(a, b, bfs, true);
  return m.extend(0);
}

bool induced_embedding(const chem::Molecule &sub, const chem::Molecule &mol) {
  std::vector<int> atoms(static_cast<std::size_t>(sub.atom_count()));
  std::iota(atoms.begin(), atoms.end(), 0);
  Matcher m(sub, mol, atoms, false);
  return m.extend(0);
}

int brute_mcs(const chem::Molecule &x, const chem::Molecule &y) {
  const bool swap = x.atom_count() > y.atom_count();
  const chem::Molecule &a = swap ? y : x;
  const chem::Molecule &b = swap ? x : y;
  const int n = a.atom_count();
  if (n > 20)
    throw std::invalid_argument("brute_mcs is limited to 20 atoms");
  std::vector<std::vector<std::uint32_t>> by_size(static_cast<std::size_t>(n) + 1);
  for (std::uint32_t mask = 1; mask < (1U << n); ++mask) {
    if (connected(a, mask))
      by_size[static_cast<std::size_t>(std::popcount(mask))].push_back(mask);
  }
  for (int size = n; size >= 1; --size) {
    for (const std::uint32_t mask: by_size[static_cast<std::size_t>(size)]) {
      Matcher m(a, b, bits_of(mask), false);
      if (m.extend(0))
        return size;
    }
  }
  return 0;
}

double brute_tanimoto(const fp::Fingerprint &a, const fp::Fingerprint &b) {
  int both = 0;
  int either = 0;
  for (int i = 0; i < a.n_bits(); ++i) {
    both += a.test(i) && b.test(i);
    either += a.test(i) || b.test(i);
  }
  return either == 0 ? 0.0 : static_cast<double>(both) / either;
}

std::vector<std::tuple<std::size_t, std::size_t, double>>
brute_pairs(std::span<const fp::Fingerprint> a, std::span<const fp::Fingerprint> b,
            double threshold) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = 0; j < b.size(); ++j) {
      const double tc = brute_tanimoto(a[i], b[j]);
      if (tc >= threshold)
        out.emplace_back(i, j, tc);
    }
  }
  return out;
}

std::vector<std::tuple<std::size_t, std::size_t, double>>
brute_self_pairs(std::span<const fp::Fingerprint> set, double threshold) {
  std::vector<std::tuple<std::size_t, std::size_t, double>> out;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      const double tc = brute_tanimoto(set[i], set[j]);
      if (tc >= threshold)
        out.emplace_back(i, j, tc);
    }
  }
  return out;
}

double pairwise_auroc(std::span<const double> scores, std::span<const bool> active) {
  double wins = 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!active[i])
      continue;
    for (std::size_t j = 0; j < scores.size(); ++j) {
      if (active[j])
        continue;
      total += 1.0;
      if (scores[i] > scores[j])
        wins += 1.0;
      else if (scores[i] == scores[j])
        wins += 0.5;
    }
  }
  return wins / total;
}

double enumerated_expected_hits(std::span<const double> scores,
                                std::span<const bool> active, std::size_t k) {
  const std::size_t n = scores.size();
  if (n > 9)
    throw std::invalid_argument("enumeration limited to 9 entries");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t {0});
  double sum = 0.0;
  double count = 0.0;
  // Every permutation is a tie-breaking order; a stable sort by score
  // under that order yields one equally likely ranking.
  do {
    std::vector<std::size_t> ranked = perm;
    std::ranges::stable_sort(ranked, [&](std::size_t x, std::size_t y) {
      return scores[x] > scores[y];
    });
    std::size_t hits = 0;
    for (std::size_t r = 0; r < k; ++r)
      hits += active[ranked[r]] ? 1 : 0;
    sum += static_cast<double>(hits);
    count += 1.0;
  } while (std::ranges::next_permutation(perm).found);
  return sum / count;
}

}  // namespace leakaudit::testing
