//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include "leakaudit/chem/element.hpp"

#include <array>

namespace leakaudit::chem {
namespace {

constexpr std::array<std::string_view, kMaxAtomicNumber + 1> kSymbols = {
    "",   "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na",
    "Mg", "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",
    "Cr", "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br",
    "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag",
    "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu",
    "Hf", "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi",
    "Po", "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am",
    "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh",
    "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

// Valences indexed by effective valence-electron count (group electrons
// minus formal charge). Row 0 is the second-period rule, row 1 allows the
// expanded octets of P and S.
constexpr std::array<int, 1> kV0{0};
constexpr std::array<int, 1> kV1{1};
constexpr std::array<int, 1> kV2{2};
constexpr std::array<int, 1> kV3{3};
constexpr std::array<int, 1> kV4{4};
constexpr std::array<int, 2> kV5Hyper{3, 5};
constexpr std::array<int, 3> kV6Hyper{2, 4, 6};

int valence_electrons(int z) {
  switch (z) {
  case 1:
    return 1;
  case 5:
    return 3;
  case 6:
    return 4;
  case 7:
  case 15:
    return 5;
  case 8:
  case 16:
    return 6;
  case 9:
  case 17:
  case 35:
  case 53:
    return 7;
  default:
    return -1;
  }
}

}  // namespace

std::string_view element_symbol(int atomic_number) {
  if (atomic_number < 1 || atomic_number > kMaxAtomicNumber)
    return {};
  return kSymbols[static_cast<std::size_t>(atomic_number)];
}

std::optional<int> element_from_symbol(std::string_view symbol) {
  for (int z = 1; z <= kMaxAtomicNumber; ++z) {
    if (kSymbols[static_cast<std::size_t>(z)] == symbol)
      return z;
  }
  return std::nullopt;
}

std::span<const int> allowed_valences(int atomic_number, int formal_charge) {
  const int ve = valence_electrons(atomic_number);
  if (ve < 0)
    return {};
  if (atomic_number == 1)
    return formal_charge == 0 ? std::span<const int>(kV1)
                              : std::span<const int>(kV0);

  const bool hyper = atomic_number == 15 || atomic_number == 16;
  switch (ve - formal_charge) {
  case 1:
  case 7:
    return kV1;
  case 2:
    return kV2;
  case 3:
    return kV3;
  case 4:
    return kV4;
  case 5:
    return hyper ? std::span<const int>(kV5Hyper) : std::span<const int>(kV3);
  case 6:
    return hyper ? std::span<const int>(kV6Hyper) : std::span<const int>(kV2);
  default:
    return kV0;
  }
}

bool is_organic_subset(int atomic_number) {
  switch (atomic_number) {
  case 5:
  case 6:
  case 7:
  case 8:
  case 9:
  case 15:
  case 16:
  case 17:
  case 35:
  case 53:
    return true;
  default:
    return false;
  }
}

}  // namespace leakaudit::chem
