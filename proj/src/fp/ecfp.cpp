//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <bit>
#include <string>
#include <utility>

#include "leakaudit/fp/fingerprint.hpp"
#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::fp {
namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;
constexpr std::uint64_t kSeed = 0xcbf29ce484222325ULL;

}  // namespace

void FingerprintParams::validate() const {
  if (n_bits <= 0 || !std::has_single_bit(static_cast<unsigned>(n_bits)))
    throw std::invalid_argument("n_bits must be a positive power of two, got " +
                                std::to_string(n_bits));
  if (radius < 0 || radius > 8)
    throw std::invalid_argument("radius must be in [0, 8], got " +
                                std::to_string(radius));
}

Fingerprint::Fingerprint(int n_bits)
    : n_bits_(n_bits),
      words_(static_cast<std::size_t>(std::max(1, (n_bits + 63) / 64)), 0) {
  FingerprintParams {0, n_bits}.validate();
}

Fingerprint Fingerprint::from_indices(int n_bits, std::span<const int> indices) {
  Fingerprint fp(n_bits);
  for (const int i: indices) {
    if (i < 0 || i >= n_bits)
      throw std::out_of_range("bit index out of range");
    fp.set(i);
  }
  fp.recount();
  return fp;
}

void Fingerprint::set(int bit) {
  words_[static_cast<std::size_t>(bit) >> 6] |= 1ULL
                                                << (static_cast<unsigned>(bit) & 63U);
}

void Fingerprint::recount() {
  popcount_ = static_cast<int>(simd::popcount(words_));
}

std::vector<int> Fingerprint::set_bits() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(popcount_));
  for (std::size_t w = 0; w < words_.size(); ++w) {
    std::uint64_t word = words_[w];
    while (word != 0) {
      out.push_back(static_cast<int>(w * 64) + std::countr_zero(word));
      word &= word - 1;
    }
  }
  return out;
}

std::uint64_t hash_sequence(std::span<const std::int64_t> values) {
  std::uint64_t h = mix64(kSeed ^ static_cast<std::uint64_t>(values.size()));
  for (const std::int64_t v: values)
    h = mix64(h ^ mix64(static_cast<std::uint64_t>(v) + kGolden));
  return h;
}

std::vector<std::vector<std::uint64_t>>
atom_identifiers(const chem::Molecule &mol, int radius) {
  const int n = mol.atom_count();
  std::vector<std::vector<std::uint64_t>> ids;
  ids.reserve(static_cast<std::size_t>(radius) + 1);

  std::vector<std::uint64_t> current(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const chem::Atom &a = mol.atom(i);
    int heavy_degree = 0;
    for (const chem::Neighbor &nb: mol.neighbors(i))
      heavy_degree += mol.atom(nb.atom).atomic_number > 1 ? 1 : 0;
    const std::int64_t inv[] = {a.atomic_number,     heavy_degree,
                                a.implicit_h,        a.formal_charge,
                                a.aromatic ? 1 : 0,  mol.is_ring_atom(i) ? 1 : 0};
    current[static_cast<std::size_t>(i)] = hash_sequence(inv);
  }
  ids.push_back(current);

  std::vector<std::int64_t> buf;
  std::vector<std::pair<std::int64_t, std::int64_t>> env;
  for (int r = 1; r <= radius; ++r) {
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      const auto nbrs = mol.neighbors(i);
      if (nbrs.empty()) {
        next[static_cast<std::size_t>(i)] = current[static_cast<std::size_t>(i)];
        continue;
      }
      env.clear();
      for (const chem::Neighbor &nb: nbrs)
        env.emplace_back(static_cast<std::int64_t>(mol.bond(nb.bond).order),
                         static_cast<std::int64_t>(
                             current[static_cast<std::size_t>(nb.atom)]));
      std::ranges::sort(env);
      buf.clear();
      buf.push_back(r);
      buf.push_back(static_cast<std::int64_t>(current[static_cast<std::size_t>(i)]));
      for (const auto &[code, id]: env) {
        buf.push_back(code);
        buf.push_back(id);
      }
      next[static_cast<std::size_t>(i)] = hash_sequence(buf);
    }
    current = std::move(next);
    ids.push_back(current);
  }
  return ids;
}

Fingerprint ecfp(const chem::Molecule &mol, const FingerprintParams &params) {
  params.validate();
  std::vector<std::uint64_t> all;
  for (const auto &iteration: atom_identifiers(mol, params.radius))
    all.insert(all.end(), iteration.begin(), iteration.end());
  std::ranges::sort(all);
  const auto dup = std::ranges::unique(all);
  all.erase(dup.begin(), dup.end());

  Fingerprint fp(params.n_bits);
  const std::uint64_t mask = static_cast<std::uint64_t>(params.n_bits) - 1;
  for (const std::uint64_t id: all)
    fp.set(static_cast<int>(id & mask));
  fp.recount();
  return fp;
}

}  // namespace leakaudit::fp
