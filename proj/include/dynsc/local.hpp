#pragma once

#include <algorithm>
#include <optional>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "dynsc/levels.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// The containing set with the highest level; ties go to the lowest id, and
/// when every containing set is at level -1 the lowest id wins.
inline SetId highest_level_set(const LevelState& state, ElementId e) {
  const auto sets = state.system().sets_of(e);
  SetId best = sets.front();
  for (SetId s : sets) {
    if (state.set_level(s) > state.set_level(best)) best = s;
  }
  return best;
}

/// Largest j in [0, level_cap] such that |N_j(s)| >= beta^(j+1) (s is j-PD),
/// or -1 when s is not PD at any level.
inline int highest_pd_level(const LevelState& state, SetId s) {
  const auto h = state.histogram(s);
  const int cap = state.level_cap();
  // below[j] = |N_j(s)|; only levels up to cap matter.
  std::size_t total = 0;
  for (int l = 0; l < cap; ++l) total += h[l];
  for (int j = cap; j >= 0; --j) {
    if (state.powers().at_least(total, j + 1)) return j;
    if (j > 0) total -= h[j - 1];
  }
  return -1;
}

/// Which elements a rise moved and from where.
struct RiseMove {
  ElementId element;
  SetId previous_owner;
  int previous_level;
};

/// Cleans a j-PD set: s ends at level max(lev(s), j + 1) and takes every
/// element of s below level j into its cov. Its own cov follows it up.
/// Elements strictly below j are the only ones that change owner, which is
/// what bounds the level of the next rising phase.
inline std::vector<RiseMove> rise_set(LevelState& state, SetId s, int j) {
  const auto& sys = state.system();
  const int target = std::max(state.set_level(s), j + 1);
  std::vector<RiseMove> moves;
  const int old_level = state.set_level(s);
  if (!state.cov(s).empty() && old_level < target) {
    for (ElementId e : state.cov(s)) moves.push_back({e, s, old_level});
    state.relevel(s, target);
  }
  for (ElementId e : sys.set(s)) {
    if (!state.is_active(e) || state.asn(e) == s) continue;
    const int lev = state.elem_level(e);
    if (lev >= j) continue;
    moves.push_back({e, state.asn(e), lev});
    state.move(e, s, target);
  }
  return moves;
}

namespace detail {

inline void sort_unique(std::vector<SetId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

/// Repeatedly rises the PD set of `candidates` with the highest level j
/// (ties: lowest id) until none is PD. Rises only shrink the N_j counts of
/// other sets, so a set's highest PD level can only go down while it waits.
/// Returns the highest j risen at, or -1.
template <typename OnRise>
int rise_until_clean(LevelState& state, const std::vector<SetId>& candidates, OnRise&& on_rise) {
  using Entry = std::pair<int, SetId>;
  auto order = [](const Entry& a, const Entry& b) {
    return a.first != b.first ? a.first < b.first : a.second > b.second;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(order)> heap(order);
  for (SetId s : candidates) {
    const int j = highest_pd_level(state, s);
    if (j >= 0) heap.push({j, s});
  }
  int max_level = -1;
  while (!heap.empty()) {
    auto [j, s] = heap.top();
    heap.pop();
    const int now = highest_pd_level(state, s);
    if (now < 0) continue;
    if (now < j) {
      heap.push({now, s});
      continue;
    }
    max_level = std::max(max_level, j);
    on_rise(s, j, rise_set(state, s, j));
  }
  return max_level;
}

}  // namespace detail

/// Maintains: no set is ND (|cov(s)| < beta^(lev(s)-1)) and no set is j-PD
/// (|N_j(s)| >= beta^(j+1)) for any j, via alternating rising and falling
/// phases after each update.
class LocalAlgorithm {
 public:
  LocalAlgorithm(const SetSystem& sys, double beta, std::size_t n_cap) : state_(sys, beta, n_cap) {}

  static constexpr const char* kName = "local";

  /// Per-update record of the phase loop.
  struct PhaseTrace {
    std::size_t rising_phases = 0;
    std::size_t falling_phases = 0;
    /// Highest level risen at, for each rising phase that rose something.
    std::vector<int> rising_levels;
  };

  StepReport update(const UpdateStep& step) {
    const ElementId e = step.element;
    if (e >= state_.system().num_elements()) throw UpdateError("element id out of range");
    trace_ = {};
    state_.begin_step();
    if (step.is_insert()) {
      if (state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
      state_.insert(e, highest_level_set(state_, e), 0);
      const auto sets = state_.system().sets_of(e);
      settle({}, std::vector<SetId>(sets.begin(), sets.end()));
    } else {
      if (!state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
      const auto [owner, level] = state_.erase(e);
      settle({owner}, {});
    }
    StepReport report;
    report.cover_size = state_.cover_size();
    report.recourse = state_.end_step();
    return report;
  }

  /// Rises every PD set among `sets`; returns the previous owners of moved
  /// elements (candidates for falling).
  std::vector<SetId> rising_phase(const std::vector<SetId>& sets) {
    ++trace_.rising_phases;
    std::vector<SetId> losers;
    const int top = detail::rise_until_clean(state_, sets, [&](SetId s, int, const std::vector<RiseMove>& moves) {
      for (const auto& m : moves) {
        if (m.previous_owner != s) losers.push_back(m.previous_owner);
      }
    });
    if (top >= 0) trace_.rising_levels.push_back(top);
    detail::sort_unique(losers);
    return losers;
  }

  /// Drops every ND set among `sets` to floor(log_beta |cov|); returns all
  /// sets containing an element whose level dropped.
  std::vector<SetId> falling_phase(std::vector<SetId> sets) {
    ++trace_.falling_phases;
    detail::sort_unique(sets);
    std::vector<SetId> touched;
    for (SetId s : sets) {
      const auto size = state_.cov(s).size();
      if (size == 0) continue;
      if (state_.powers().at_least(size, state_.set_level(s) - 1)) continue;
      state_.relevel(s, state_.powers().level_of(size));
      for (ElementId e : state_.cov(s)) {
        const auto containing = state_.system().sets_of(e);
        touched.insert(touched.end(), containing.begin(), containing.end());
      }
    }
    detail::sort_unique(touched);
    return touched;
  }

  const LevelState& state() const { return state_; }
  std::size_t cover_size() const { return state_.cover_size(); }
  std::vector<SetId> cover() const { return state_.cover(); }
  const PhaseTrace& last_trace() const { return trace_; }

  std::optional<std::string> check() const {
    if (auto err = state_.validate()) return err;
    const auto report = check_properties(state_, 1, 1);
    if (!report.property1_violations.empty()) {
      const auto& v = report.property1_violations.front();
      return "set " + std::to_string(v.set + 1) + " is ND: |cov|=" + std::to_string(v.cov_size) +
             " at level " + std::to_string(v.level);
    }
    if (!report.property2_violations.empty()) {
      const auto& v = report.property2_violations.front();
      return "set " + std::to_string(v.set + 1) + " is " + std::to_string(v.level) +
             "-PD: |N_j|=" + std::to_string(v.below_count);
    }
    return std::nullopt;
  }

 private:
  void settle(std::vector<SetId> to_fall, std::vector<SetId> to_rise) {
    if (!to_fall.empty()) to_rise = falling_phase(std::move(to_fall));
    while (!to_rise.empty()) {
      to_fall = rising_phase(to_rise);
      if (to_fall.empty()) break;
      to_rise = falling_phase(std::move(to_fall));
    }
  }

  LevelState state_;
  PhaseTrace trace_;
};

}  // namespace dynsc
