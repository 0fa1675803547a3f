//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "leakaudit/chem/molecule.hpp"

namespace leakaudit::fp {

class MismatchedParams: public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Circular fingerprint settings. ECFP2 names the diameter, so the
/// default radius is 1.
struct FingerprintParams {
  int radius = 1;
  int n_bits = 4096;

  /// Throws std::invalid_argument unless n_bits is a positive power of two
  /// and 0 <= radius <= 8.
  void validate() const;

  friend bool operator==(const FingerprintParams &,
                         const FingerprintParams &) = default;
};

/// Fixed-width bitset with a cached population count.
class Fingerprint {
public:
  Fingerprint() = default;
  explicit Fingerprint(int n_bits);

  /// Builds from set-bit indices; duplicates are ignored.
  static Fingerprint from_indices(int n_bits, std::span<const int> indices);

  int n_bits() const { return n_bits_; }
  int popcount() const { return popcount_; }
  std::span<const std::uint64_t> words() const { return words_; }

  bool test(int bit) const {
    return (words_[static_cast<std::size_t>(bit) >> 6] >>
            (static_cast<unsigned>(bit) & 63U)) & 1U;
  }
  std::vector<int> set_bits() const;

  friend bool operator==(const Fingerprint &a, const Fingerprint &b) {
    return a.n_bits_ == b.n_bits_ && a.words_ == b.words_;
  }

private:
  void set(int bit);
  void recount();

  int n_bits_ = 0;
  int popcount_ = 0;
  std::vector<std::uint64_t> words_;

  friend Fingerprint ecfp(const chem::Molecule &, const FingerprintParams &);
};

/// Final mixing step of splitmix64; the avalanche function behind every
/// atom-environment identifier.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Order-sensitive hash of a sequence of integers.
std::uint64_t hash_sequence(std::span<const std::int64_t> values);

/// Per-atom identifiers for iterations 0..radius, one inner vector per
/// iteration. Exposed for tests and the fp debug command.
std::vector<std::vector<std::uint64_t>>
atom_identifiers(const chem::Molecule &mol, int radius);

/// Folded circular (Morgan/ECFP-style) fingerprint.
///
/// Iteration 0 hashes (atomic number, heavy degree, hydrogens, charge,
/// aromatic, ring membership). Iteration r hashes (r, previous id, sorted
/// (bond code, neighbor previous id) pairs); atoms without neighbors keep
/// their identifier. Distinct identifiers over all iterations are folded
/// with id mod n_bits.
Fingerprint ecfp(const chem::Molecule &mol, const FingerprintParams &params = {});

}  // namespace leakaudit::fp
