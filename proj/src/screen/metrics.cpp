//
// leakaudit - benchmark integrity auditing for ligand-based virtual screening
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include "leakaudit/screen/screen.hpp"

namespace leakaudit::screen {
namespace {

// Share of `slots` positions that tied actives fill.
double tie_hits(std::size_t group, std::size_t group_actives, std::size_t slots,
                TieMode mode) {
  switch (mode) {
  case TieMode::kOptimistic:
    return static_cast<double>(std::min(group_actives, slots));
  case TieMode::kPessimistic: {
    const std::size_t inactives = group - group_actives;
    return slots > inactives ? static_cast<double>(slots - inactives) : 0.0;
  }
  case TieMode::kExpected:
    break;
  }
  return static_cast<double>(group_actives) * static_cast<double>(slots) /
         static_cast<double>(group);
}

double unit_double(std::uint64_t x) {
  return static_cast<double>(x >> 11) * 0x1.0p-53;
}

}  // namespace

std::string_view tie_mode_name(TieMode m) {
  switch (m) {
  case TieMode::kExpected:
    return "expected";
  case TieMode::kOptimistic:
    return "optimistic";
  case TieMode::kPessimistic:
    return "pessimistic";
  }
  return "unknown";
}

std::optional<TieMode> tie_mode_from_name(std::string_view name) {
  for (const TieMode m: {TieMode::kExpected, TieMode::kOptimistic, TieMode::kPessimistic}) {
    if (tie_mode_name(m) == name)
      return m;
  }
  return std::nullopt;
}

std::size_t top_k(double fraction, std::size_t n) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw std::invalid_argument("enrichment fraction must be in (0, 1)");
  // The epsilon keeps products such as 0.29 * 100 from flooring to 28.
  const auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n) + 1e-9));
  if (k == 0)
    throw DegenerateInput("top fraction selects no molecules (k = 0)");
  return k;
}

EnrichmentResult enrichment_factor(const Ranking &ranking, double fraction, TieMode mode) {
  const std::size_t k = top_k(fraction, ranking.n);
  if (ranking.actives == 0)
    throw DegenerateInput("ranking has no actives");
  const auto &e = ranking.entries;
  double hits = 0.0;
  std::size_t pos = 0;
  while (pos < k) {
    std::size_t end = pos;
    std::size_t group_actives = 0;
    while (end < e.size() && e[end].score == e[pos].score) {
      group_actives += e[end].active ? 1 : 0;
      ++end;
    }
    const std::size_t group = end - pos;
    const std::size_t slots = std::min(k - pos, group);
    hits += slots == group ? static_cast<double>(group_actives)
                           : tie_hits(group, group_actives, slots, mode);
    pos = end;
  }
  EnrichmentResult r;
  r.fraction = fraction;
  r.k = k;
  r.hits = hits;
  r.ef = hits * static_cast<double>(ranking.n) /
         (static_cast<double>(k) * static_cast<double>(ranking.actives));
  r.tie_mode = mode;
  return r;
}

double expected_top_k_hits(std::span<const double> scores,
                           std::span<const std::uint8_t> active, std::size_t k,
                           std::vector<double> &scratch) {
  if (k == 0 || k > scores.size())
    throw std::invalid_argument("k must be in [1, N]");
  scratch.assign(scores.begin(), scores.end());
  std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(k - 1),
                   scratch.end(), std::greater<>());
  const double cut = scratch[k - 1];
  std::size_t above = 0;
  std::size_t above_active = 0;
  std::size_t tied = 0;
  std::size_t tied_active = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] > cut) {
      ++above;
      above_active += active[i];
    } else if (scores[i] == cut) {
      ++tied;
      tied_active += active[i];
    }
  }
  return static_cast<double>(above_active) +
         tie_hits(tied, tied_active, k - above, TieMode::kExpected);
}

double auroc(const Ranking &ranking) {
  const std::uint64_t a = ranking.actives;
  const std::uint64_t i = ranking.n - ranking.actives;
  if (a == 0 || i == 0)
    throw DegenerateInput("AUROC needs at least one active and one inactive");
  // Entries are sorted descending; walk from the bottom counting inactives
  // below each tie group. Twice the Mann-Whitney U stays an exact integer.
  const auto &e = ranking.entries;
  std::uint64_t twice_u = 0;
  std::uint64_t inactives_below = 0;
  std::size_t end = e.size();
  while (end > 0) {
    std::size_t begin = end - 1;
    while (begin > 0 && e[begin - 1].score == e[end - 1].score)
      --begin;
    std::uint64_t ga = 0;
    for (std::size_t p = begin; p < end; ++p)
      ga += e[p].active ? 1 : 0;
    const std::uint64_t gi = (end - begin) - ga;
    twice_u += 2 * ga * inactives_below + ga * gi;
    inactives_below += gi;
    end = begin;
  }
  return static_cast<double>(twice_u) / (2.0 * static_cast<double>(a) * static_cast<double>(i));
}

void InflationParams::validate() const {
  if (a < 1 || k < 1 || n < 1)
    throw std::invalid_argument("inflation model needs N, A, k >= 1");
  if (g < 0 || g > std::min(a, k) || std::min(a, k) > n || a > n || k > n)
    throw std::invalid_argument("inflation model needs 0 <= g <= min(A, k) and A, k <= N");
}

double analytic_inflated_ef(const InflationParams &p) {
  p.validate();
  const auto n = static_cast<double>(p.n);
  const auto a = static_cast<double>(p.a);
  const auto k = static_cast<double>(p.k);
  const auto g = static_cast<double>(p.g);
  const double hits = p.n == p.g ? g : g + (a - g) * (k - g) / (n - g);
  return hits / (k * a / n);
}

SimulationResult simulate_leak_ef(const InflationParams &p, std::size_t trials,
                                  std::uint64_t seed) {
  p.validate();
  if (trials == 0)
    throw std::invalid_argument("simulation needs at least one trial");
  const auto n = static_cast<std::size_t>(p.n);
  const auto a = static_cast<std::size_t>(p.a);
  const auto k = static_cast<std::size_t>(p.k);
  const auto g = static_cast<std::size_t>(p.g);

  std::mt19937_64 rng(seed);
  std::vector<double> scores(n);
  std::vector<std::uint8_t> active(n, 0);
  std::fill_n(active.begin(), a, std::uint8_t {1});
  std::vector<double> scratch;
  const double scale = static_cast<double>(n) / (static_cast<double>(k) * static_cast<double>(a));

  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    for (std::size_t i = 0; i < n; ++i)
      scores[i] = i < g ? kActiveScore : unit_double(rng());
    const double ef = expected_top_k_hits(scores, active, k, scratch) * scale;
    const double delta = ef - mean;
    mean += delta / static_cast<double>(t + 1);
    m2 += delta * (ef - mean);
  }
  SimulationResult r;
  r.trials = trials;
  r.mean = mean;
  r.stddev = trials > 1 ? std::sqrt(m2 / static_cast<double>(trials - 1)) : 0.0;
  r.stderr_mean = r.stddev / std::sqrt(static_cast<double>(trials));
  r.ci_low = mean - 1.96 * r.stderr_mean;
  r.ci_high = mean + 1.96 * r.stderr_mean;
  return r;
}

}  // namespace leakaudit::screen
