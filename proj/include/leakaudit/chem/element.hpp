//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace leakaudit::chem {

inline constexpr int kMaxAtomicNumber = 118;

/// Element symbol for atomic numbers 1..118; empty view otherwise.
std::string_view element_symbol(int atomic_number);

/// Looks up an element by its case-sensitive symbol ("C", "Cl", "Se").
std::optional<int> element_from_symbol(std::string_view symbol);

/// Allowed total valences under the fixed valence model, adjusted for
/// formal charge by isoelectronic shift. Empty when the element has no
/// valence rule (metals and the like), in which case no check is made.
std::span<const int> allowed_valences(int atomic_number, int formal_charge);

/// True for the elements that may be written without brackets.
bool is_organic_subset(int atomic_number);

}  // namespace leakaudit::chem
