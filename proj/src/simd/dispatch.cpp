//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <atomic>
#include <stdexcept>
#include <string>

#include "leakaudit/simd/popcount.hpp"

namespace leakaudit::simd {
namespace {

bool cpu_has_avx2() {
#if defined(LEAKAUDIT_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
  return false;
#endif
}

Isa widest_available() {
  if (isa_available(Isa::kAvx2))
    return Isa::kAvx2;
  if (isa_available(Isa::kNeon))
    return Isa::kNeon;
  return Isa::kScalar;
}

std::atomic<const Kernels *> g_active {nullptr};
std::atomic<Isa> g_active_isa {Isa::kScalar};

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
  case Isa::kScalar:
    return "scalar";
  case Isa::kAvx2:
    return "avx2";
  case Isa::kNeon:
    return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
  case Isa::kScalar:
    return true;
  case Isa::kAvx2:
    return cpu_has_avx2();
  case Isa::kNeon:
#if defined(LEAKAUDIT_HAVE_NEON)
    return true;
#else
    return false;
#endif
  }
  return false;
}

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (const Isa isa: {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) {
    if (isa_available(isa))
      out.push_back(isa);
  }
  return out;
}

const Kernels &kernels_for(Isa isa) {
  if (!isa_available(isa))
    throw std::invalid_argument("kernel variant not available: " +
                                std::string(isa_name(isa)));
  switch (isa) {
#if defined(LEAKAUDIT_HAVE_AVX2)
  case Isa::kAvx2:
    return detail::avx2_kernels();
#endif
#if defined(LEAKAUDIT_HAVE_NEON)
  case Isa::kNeon:
    return detail::neon_kernels();
#endif
  default:
    return detail::scalar_kernels();
  }
}

void force_isa(Isa isa) {
  const Kernels &k = kernels_for(isa);
  g_active_isa.store(isa);
  g_active.store(&k);
}

Isa active_isa() {
  active_kernels();
  return g_active_isa.load();
}

const Kernels &active_kernels() {
  const Kernels *k = g_active.load(std::memory_order_acquire);
  if (k != nullptr)
    return *k;
  const Isa isa = widest_available();
  const Kernels *chosen = &kernels_for(isa);
  const Kernels *expected = nullptr;
  if (g_active.compare_exchange_strong(expected, chosen)) {
    g_active_isa.store(isa);
    return *chosen;
  }
  return *expected;
}

}  // namespace leakaudit::simd
