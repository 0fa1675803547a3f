//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/sim/mcs.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <stdexcept>

namespace leakaudit::sim {
namespace {

// Dense edge-label matrix: 0 = no bond, otherwise the bond order code.
class EdgeLabels {
public:
  explicit EdgeLabels(const chem::Molecule &mol)
      : n_(static_cast<std::size_t>(mol.atom_count())), labels_(n_ * n_, 0) {
    for (const chem::Bond &b: mol.bonds()) {
      const auto code = static_cast<std::uint8_t>(b.order);
      labels_[static_cast<std::size_t>(b.a) * n_ + static_cast<std::size_t>(b.b)] = code;
      labels_[static_cast<std::size_t>(b.b) * n_ + static_cast<std::size_t>(b.a)] = code;
    }
  }
  std::uint8_t operator()(int u, int v) const {
    return labels_[static_cast<std::size_t>(u) * n_ + static_cast<std::size_t>(v)];
  }

private:
  std::size_t n_;
  std::vector<std::uint8_t> labels_;
};

constexpr int kEdgeLabels = 5;

struct Domain {
  std::vector<int> left;
  std::vector<int> right;
  bool adjacent = false;
};

class McSplit {
public:
  McSplit(const chem::Molecule &left, const chem::Molecule &right,
          std::uint64_t budget)
      : left_(left), right_(right), el_(left), er_(right), budget_(budget),
        goal_(std::min(left.atom_count(), right.atom_count())) { }

  void run() {
    std::map<std::pair<int, bool>, Domain> by_label;
    for (int i = 0; i < left_.atom_count(); ++i)
      by_label[{left_.atom(i).atomic_number, left_.atom(i).aromatic}].left.push_back(i);
    for (int j = 0; j < right_.atom_count(); ++j)
      by_label[{right_.atom(j).atomic_number, right_.atom(j).aromatic}].right.push_back(j);
    std::vector<Domain> domains;
    for (auto &[label, d]: by_label) {
      if (!d.left.empty() && !d.right.empty())
        domains.push_back(std::move(d));
    }
    std::vector<std::pair<int, int>> mapping;
    expand(domains, mapping);
  }

  const std::vector<std::pair<int, int>> &best() const { return best_; }
  bool aborted() const { return aborted_; }
  std::uint64_t expansions() const { return expansions_; }

private:
  bool done() const {
    return aborted_ || static_cast<int>(best_.size()) == goal_;
  }

  static int bound(const std::vector<Domain> &domains) {
    int total = 0;
    for (const Domain &d: domains)
      total += static_cast<int>(std::min(d.left.size(), d.right.size()));
    return total;
  }

  std::vector<Domain> split(const std::vector<Domain> &domains, int v, int w) const {
    std::vector<Domain> out;
    for (const Domain &d: domains) {
      std::array<Domain, kEdgeLabels> parts;
      for (const int l: d.left) {
        if (l != v)
          parts[el_(v, l)].left.push_back(l);
      }
      for (const int r: d.right) {
        if (r != w)
          parts[er_(w, r)].right.push_back(r);
      }
      for (int x = 0; x < kEdgeLabels; ++x) {
        Domain &p = parts[static_cast<std::size_t>(x)];
        if (p.left.empty() || p.right.empty())
          continue;
        p.adjacent = d.adjacent || x != 0;
        out.push_back(std::move(p));
      }
    }
    return out;
  }

  void expand(const std::vector<Domain> &domains,
              std::vector<std::pair<int, int>> &mapping) {
    if (done())
      return;
    if (++expansions_ > budget_) {
      aborted_ = true;
      return;
    }
    if (mapping.size() > best_.size())
      best_ = mapping;
    if (static_cast<int>(mapping.size()) + bound(domains) <=
        static_cast<int>(best_.size()))
      return;

    // Smallest eligible domain; once something is mapped only domains
    // touching the mapping keep the subgraph connected.
    int chosen = -1;
    std::size_t chosen_size = 0;
    for (std::size_t i = 0; i < domains.size(); ++i) {
      const Domain &d = domains[i];
      if (!mapping.empty() && !d.adjacent)
        continue;
      const std::size_t size = std::max(d.left.size(), d.right.size());
      if (chosen < 0 || size < chosen_size) {
        chosen = static_cast<int>(i);
        chosen_size = size;
      }
    }
    if (chosen < 0)
      return;
    const Domain &d = domains[static_cast<std::size_t>(chosen)];

    int v = d.left.front();
    for (const int l: d.left) {
      if (left_.degree(l) > left_.degree(v))
        v = l;
    }

    for (const int w: d.right) {
      auto next = split(domains, v, w);
      mapping.emplace_back(v, w);
      expand(next, mapping);
      mapping.pop_back();
      if (done())
        return;
    }

    // v stays unmatched in this subtree.
    std::vector<Domain> rest = domains;
    auto &left = rest[static_cast<std::size_t>(chosen)].left;
    left.erase(std::ranges::find(left, v));
    if (left.empty())
      rest.erase(rest.begin() + chosen);
    expand(rest, mapping);
  }

  const chem::Molecule &left_;
  const chem::Molecule &right_;
  EdgeLabels el_;
  EdgeLabels er_;
  std::uint64_t budget_;
  int goal_;
  std::uint64_t expansions_ = 0;
  bool aborted_ = false;
  std::vector<std::pair<int, int>> best_;
};

}  // namespace

McsResult mcs_ratio(const chem::Molecule &a, const chem::Molecule &b,
                    const McsOptions &options) {
  if (options.budget == 0)
    throw std::invalid_argument("MCS budget must be positive");
  McsResult result;
  const int denom = std::max(a.atom_count(), b.atom_count());
  if (denom == 0) {
    result.ratio = 1.0;
    return result;
  }

  const bool swap = a.atom_count() > b.atom_count();
  McSplit search(swap ? b : a, swap ? a : b, options.budget);
  search.run();

  result.mapping = search.best();
  if (swap) {
    for (auto &[x, y]: result.mapping)
      std::swap(x, y);
  }
  std::ranges::sort(result.mapping);
  result.mcs_atom_count = static_cast<int>(result.mapping.size());
  result.ratio = static_cast<double>(result.mcs_atom_count) / denom;
  result.exact = !search.aborted();
  result.expansions = search.expansions();
  return result;
}

}  // namespace leakaudit::sim
