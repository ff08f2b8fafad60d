#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dynsc/levels.hpp"
#include "dynsc/local.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// Relaxes both level properties globally.
///
/// Each active element carries a passive level plev(e) >= lev(e) that never
/// decreases during its lifetime. Per level i the algorithm keeps
///   A_i = |{e : lev(e) <= i < plev(e)}|   (clean)
///   P_i = |{e : plev(e) <= i}|            (insertion dirt)
///   D_i = deletions of elements with lev(e) <= i since the last reset
/// and keeps P_i + D_i <= 2(beta-1) * A_i for every i. When some level
/// violates this, the highest violating level is rebuilt greedily.
class GlobalAlgorithm {
 public:
  using RebuildHook = std::function<void(const LevelState&, int i_crit)>;

  GlobalAlgorithm(const SetSystem& sys, double beta, std::size_t n_cap)
      : state_(sys, beta, n_cap),
        greedy_(sys),
        plev_(sys.num_elements(), -1),
        clean_(levels(), 0),
        passive_(levels(), 0),
        deleted_(levels(), 0) {}

  static constexpr const char* kName = "global";

  StepReport update(const UpdateStep& step) {
    const ElementId e = step.element;
    if (e >= state_.system().num_elements()) throw UpdateError("element id out of range");
    state_.begin_step();
    const int cap = state_.level_cap();
    if (step.is_insert()) {
      if (state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
      state_.insert(e, highest_level_set(state_, e), 0);
      const int lev = state_.elem_level(e);
      plev_[e] = lev;
      for (int i = lev; i <= cap; ++i) ++passive_[i];
    } else {
      if (!state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
      const int lev = state_.elem_level(e);
      const int plev = plev_[e];
      for (int i = lev; i <= std::min(plev - 1, cap); ++i) {
        --clean_[i];
        ++deleted_[i];
      }
      for (int i = plev; i <= cap; ++i) {
        --passive_[i];
        ++deleted_[i];
      }
      state_.erase(e);
      plev_[e] = -1;
    }
    StepReport report;
    // Each rebuild clears every level up to i_crit, so later violations can
    // only sit strictly higher and the loop ends after at most cap+1 rounds.
    for (int i_crit = highest_violation(); i_crit >= 0; i_crit = highest_violation()) {
      rebuild(i_crit);
      report.rebuild_fired = true;
    }
    report.cover_size = state_.cover_size();
    report.recourse = state_.end_step();
    return report;
  }

  /// Highest i with P_i + D_i > 2(beta-1) * A_i, or -1.
  int highest_violation() const {
    const double slack = 2.0 * (state_.beta() - 1.0);
    for (int i = state_.level_cap(); i >= 0; --i) {
      if (static_cast<double>(passive_[i] + deleted_[i]) > slack * static_cast<double>(clean_[i])) return i;
    }
    return -1;
  }

  const LevelState& state() const { return state_; }
  int passive_level(ElementId e) const { return plev_[e]; }
  const std::vector<std::int64_t>& clean_counts() const { return clean_; }
  const std::vector<std::int64_t>& passive_counts() const { return passive_; }
  const std::vector<std::int64_t>& deletion_counts() const { return deleted_; }
  std::size_t cover_size() const { return state_.cover_size(); }
  std::vector<SetId> cover() const { return state_.cover(); }
  std::size_t rebuilds() const { return rebuilds_; }

  /// A and P recomputed from (lev, plev) of the active elements.
  std::pair<std::vector<std::int64_t>, std::vector<std::int64_t>> recount() const {
    std::vector<std::int64_t> a(levels(), 0), p(levels(), 0);
    const int cap = state_.level_cap();
    for (ElementId e = 0; e < state_.system().num_elements(); ++e) {
      if (!state_.is_active(e)) continue;
      const int lev = state_.elem_level(e);
      for (int i = 0; i <= cap; ++i) {
        if (lev <= i && i < plev_[e]) ++a[i];
        if (plev_[e] <= i) ++p[i];
      }
    }
    return {a, p};
  }

  std::optional<std::string> check() const {
    if (auto err = state_.validate()) return err;
    for (ElementId e = 0; e < state_.system().num_elements(); ++e) {
      if (state_.is_active(e) && plev_[e] < state_.elem_level(e)) {
        return "element " + std::to_string(e + 1) + " has plev " + std::to_string(plev_[e]) +
               " below lev " + std::to_string(state_.elem_level(e));
      }
    }
    auto [a, p] = recount();
    if (a != clean_) return std::string("A counters differ from recomputation");
    if (p != passive_) return std::string("P counters differ from recomputation");
    if (const int i = highest_violation(); i >= 0) {
      return "level " + std::to_string(i) + " violates P+D <= 2(beta-1)A";
    }
    return std::nullopt;
  }

  RebuildHook before_rebuild;
  RebuildHook after_rebuild;

 private:
  std::size_t levels() const { return static_cast<std::size_t>(state_.level_cap()) + 1; }

  // Adds sign * (contribution of an element at (lev, plev)) via difference
  // arrays: A over [lev, plev-1], P over [plev, cap].
  static void add_range(std::vector<std::int64_t>& diff, int from, int to, std::int64_t sign) {
    if (from > to) return;
    diff[from] += sign;
    diff[to + 1] -= sign;
  }

  void rebuild(int i_crit) {
    if (before_rebuild) before_rebuild(state_, i_crit);
    const int cap = state_.level_cap();
    std::vector<std::int64_t> diff_clean(levels() + 1, 0), diff_passive(levels() + 1, 0);
    auto account = [&](int lev, int plev, std::int64_t sign) {
      add_range(diff_clean, lev, std::min(plev - 1, cap), sign);
      add_range(diff_passive, std::min(plev, cap + 1), cap, sign);
    };

    std::vector<std::pair<ElementId, int>> old_levels;
    for (int l = 0; l <= i_crit; ++l) {
      for (SetId s : state_.sets_at_level(l)) {
        for (ElementId e : state_.cov(s)) old_levels.emplace_back(e, l);
      }
    }
    for (const auto& [e, lev] : old_levels) account(lev, plev_[e], -1);

    state_.rebuild_below(i_crit, greedy_);

    for (const auto& [e, old] : old_levels) {
      const int lev = state_.elem_level(e);
      plev_[e] = std::max({plev_[e], i_crit + 1, lev});
      account(lev, plev_[e], +1);
    }
    std::int64_t run_clean = 0, run_passive = 0;
    for (std::size_t i = 0; i < levels(); ++i) {
      run_clean += diff_clean[i];
      run_passive += diff_passive[i];
      clean_[i] += run_clean;
      passive_[i] += run_passive;
    }
    for (int i = 0; i <= i_crit; ++i) deleted_[i] = 0;
    ++rebuilds_;
    if (after_rebuild) after_rebuild(state_, i_crit);
  }

  LevelState state_;
  StaticGreedy greedy_;
  std::vector<int> plev_;
  std::vector<std::int64_t> clean_;
  std::vector<std::int64_t> passive_;
  std::vector<std::int64_t> deleted_;
  std::size_t rebuilds_ = 0;
};

}  // namespace dynsc
