#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <vector>

#include "dynsc/dynsc.hpp"

namespace dynsc::testing {

// s1={e1,e2,e3}, s2={e3,e4}, s3={e4}
inline constexpr const char* kFix1 = "4 3\n1\n1\n1 2\n2 3\n";

inline SetSystem fix1() { return load_instance(kFix1); }

inline std::vector<ElementId> all_elements(const SetSystem& sys) {
  std::vector<ElementId> out(sys.num_elements());
  for (ElementId e = 0; e < out.size(); ++e) out[e] = e;
  return out;
}

/// |{e in s, active : lev(e) < j}| by scanning s.
inline std::size_t brute_nj(const LevelState& state, SetId s, int j) {
  std::size_t count = 0;
  for (ElementId e : state.system().set(s)) {
    if (state.is_active(e) && state.elem_level(e) < j) ++count;
  }
  return count;
}

/// Minimum cover by enumerating all subsets of the candidate sets.
inline std::size_t brute_opt(const SetSystem& sys, const std::vector<ElementId>& universe) {
  if (universe.empty()) return 0;
  const std::size_t m = sys.num_sets();
  std::size_t best = m + 1;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << m); ++mask) {
    const auto size = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (size >= best) continue;
    const bool ok = std::all_of(universe.begin(), universe.end(), [&](ElementId e) {
      for (SetId s : sys.sets_of(e)) {
        if (mask >> s & 1u) return true;
      }
      return false;
    });
    if (ok) best = size;
  }
  return best;
}

/// Whether `cover` contains a set for every active element in `active`.
inline bool covers(const SetSystem& sys, const std::vector<SetId>& cover, const std::vector<ElementId>& active) {
  return std::all_of(active.begin(), active.end(), [&](ElementId e) {
    for (SetId s : sys.sets_of(e)) {
      if (std::binary_search(cover.begin(), cover.end(), s)) return true;
    }
    return false;
  });
}

/// Small random instance with frequency in [2, 4].
inline SetSystem small_instance(std::uint64_t seed, std::size_t elements, std::size_t sets) {
  SyntheticParams p;
  p.elements = elements;
  p.sets = sets;
  p.min_frequency = 2;
  p.max_frequency = std::min<std::size_t>(4, sets);
  p.skew = 1.5;
  return random_instance(p, seed);
}

}  // namespace dynsc::testing
