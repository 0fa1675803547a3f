//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

namespace leakaudit {

inline constexpr const char *kToolName = "leakaudit";
inline constexpr const char *kToolVersion = "0.1.0";

}  // namespace leakaudit
