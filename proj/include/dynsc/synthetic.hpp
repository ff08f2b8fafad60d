#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "dynsc/dynamizer.hpp"
#include "dynsc/setsystem.hpp"

namespace dynsc {

struct SyntheticParams {
  std::size_t elements = 100;
  std::size_t sets = 20;
  std::size_t min_frequency = 2;
  std::size_t max_frequency = 4;
  /// Exponent of the set-popularity skew; 1 is uniform, larger values favour
  /// low set ids.
  double skew = 1.0;
  /// Fraction of memberships drawn near the element's position in the id
  /// order rather than from the skewed global distribution.
  double locality = 0.0;
};

/// Random set system: every element picks its frequency uniformly in
/// [min_frequency, max_frequency] (capped at the number of sets) and then
/// that many distinct sets.
inline SetSystem random_instance(const SyntheticParams& p, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const std::size_t m = std::max<std::size_t>(1, p.sets);
  std::vector<std::vector<SetId>> incidence(p.elements);
  for (std::size_t e = 0; e < p.elements; ++e) {
    const std::size_t lo = std::min(p.min_frequency, m);
    const std::size_t hi = std::max(lo, std::min(p.max_frequency, m));
    const std::size_t f = lo + rng.next_below(hi - lo + 1);
    const auto center = static_cast<double>(e) / static_cast<double>(std::max<std::size_t>(1, p.elements)) *
                        static_cast<double>(m);
    auto& list = incidence[e];
    while (list.size() < f) {
      SetId s;
      if (rng.next_unit() < p.locality) {
        const double offset = (rng.next_unit() - 0.5) * std::max(4.0, 0.05 * static_cast<double>(m));
        const auto raw = static_cast<long long>(std::floor(center + offset));
        s = static_cast<SetId>(((raw % static_cast<long long>(m)) + static_cast<long long>(m)) %
                               static_cast<long long>(m));
      } else {
        const double u = std::pow(rng.next_unit(), p.skew);
        s = static_cast<SetId>(std::min<std::size_t>(m - 1, static_cast<std::size_t>(u * static_cast<double>(m))));
      }
      if (std::find(list.begin(), list.end(), s) == list.end()) list.push_back(s);
    }
  }
  return SetSystem::from_incidence(m, std::move(incidence));
}

/// Random valid workload over all elements of `sys`, with an explicit
/// capacity: insertions in id order, deletions of random active elements,
/// ending empty. Used for fuzzing where the dynamizer's fixed capacity rule
/// would be too small.
inline UpdateSequence random_workload(const SetSystem& sys, std::size_t capacity, double insert_bias,
                                      std::uint64_t seed) {
  SplitMix64 rng(seed);
  UpdateSequence seq;
  seq.header.elements = sys.num_elements();
  seq.header.capacity = std::max<std::size_t>(1, capacity);
  seq.header.seed = seed;
  std::vector<ElementId> active;
  ElementId next = 0;
  while (next < sys.num_elements() || !active.empty()) {
    const bool can_insert = next < sys.num_elements() && active.size() < seq.header.capacity;
    if (can_insert && (active.empty() || rng.next_unit() < insert_bias)) {
      seq.steps.push_back(UpdateStep::insert(next));
      active.push_back(next++);
    } else {
      const std::size_t pick = rng.next_below(active.size());
      seq.steps.push_back(UpdateStep::erase(active[pick]));
      active[pick] = active.back();
      active.pop_back();
    }
  }
  seq.header.length = seq.steps.size();
  return seq;
}

}  // namespace dynsc
