#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dynsc/levels.hpp"
#include "dynsc/local.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// Keeps every set free of j-PD locally and bounds ND-ness globally through
/// per-level dirt: every time an element leaves a cov at level l (deletion,
/// or a rise that changes its level) the counter c_l grows by one, and the
/// total dirt is D = sum_l c_l * beta^-l. When D >= ((beta-1)/beta) * |C|
/// (and D > 0) the levels up to a critical level are rebuilt greedily and
/// their counters reset; this repeats until the bound holds again.
class PartialAlgorithm {
 public:
  using RebuildHook = std::function<void(const LevelState&, int i_crit)>;

  PartialAlgorithm(const SetSystem& sys, double beta, std::size_t n_cap)
      : state_(sys, beta, n_cap),
        greedy_(sys),
        dirt_(static_cast<std::size_t>(state_.level_cap()) + 1, 0) {
    inverse_powers_.reserve(dirt_.size());
    for (std::size_t j = 0; j < dirt_.size(); ++j) {
      inverse_powers_.push_back(std::pow(beta, -static_cast<double>(j)));
    }
  }

  static constexpr const char* kName = "partial";

  StepReport update(const UpdateStep& step) {
    const ElementId e = step.element;
    if (e >= state_.system().num_elements()) throw UpdateError("element id out of range");
    state_.begin_step();
    if (step.is_insert()) {
      if (state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
      state_.insert(e, highest_level_set(state_, e), 0);
      const auto sets = state_.system().sets_of(e);
      detail::rise_until_clean(state_, std::vector<SetId>(sets.begin(), sets.end()),
                               [&](SetId, int, const std::vector<RiseMove>& moves) {
                                 for (const auto& m : moves) ++dirt_[m.previous_level];
                               });
    } else {
      if (!state_.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
      const auto [owner, level] = state_.erase(e);
      ++dirt_[level];
    }
    StepReport report;
    while (over_threshold()) {
      const int i_crit = find_critical_level();
      if (before_rebuild) before_rebuild(state_, i_crit);
      state_.rebuild_below(i_crit, greedy_);
      for (int j = 0; j <= i_crit; ++j) dirt_[j] = 0;
      ++rebuilds_;
      report.rebuild_fired = true;
      if (after_rebuild) after_rebuild(state_, i_crit);
    }
    report.cover_size = state_.cover_size();
    report.recourse = state_.end_step();
    return report;
  }

  /// D = sum_j c_j * beta^-j, evaluated from the integer counters.
  double total_dirt() const {
    double total = 0.0;
    for (std::size_t j = 0; j < dirt_.size(); ++j) total += static_cast<double>(dirt_[j]) * inverse_powers_[j];
    return total;
  }

  double dirt_threshold() const {
    const double beta = state_.beta();
    return (beta - 1.0) / beta * static_cast<double>(state_.cover_size());
  }

  bool over_threshold() const {
    const double d = total_dirt();
    return d > 0.0 && d >= dirt_threshold();
  }

  /// argmax_i R(i) = (sum_{j<=i} c_j beta^-j) / (1 + |{s in C : lev(s) <= i}|),
  /// ties toward the highest i.
  int find_critical_level() const {
    int best = 0;
    double best_ratio = -1.0;
    double cumulative = 0.0;
    std::size_t sets_below = 0;
    for (int i = 0; i <= state_.level_cap(); ++i) {
      cumulative += static_cast<double>(dirt_[i]) * inverse_powers_[i];
      sets_below += state_.sets_at_level(i).size();
      const double ratio = cumulative / (1.0 + static_cast<double>(sets_below));
      if (ratio >= best_ratio) {
        best_ratio = ratio;
        best = i;
      }
    }
    return best;
  }

  const LevelState& state() const { return state_; }
  LevelState& mutable_state() { return state_; }
  std::vector<std::uint64_t>& dirt_counters() { return dirt_; }
  const std::vector<std::uint64_t>& dirt_counters() const { return dirt_; }
  std::size_t cover_size() const { return state_.cover_size(); }
  std::vector<SetId> cover() const { return state_.cover(); }
  std::size_t rebuilds() const { return rebuilds_; }

  std::optional<std::string> check() const {
    if (auto err = state_.validate()) return err;
    const auto report = check_properties(state_, 0, 1);
    if (!report.property2_violations.empty()) {
      const auto& v = report.property2_violations.front();
      return "set " + std::to_string(v.set + 1) + " is " + std::to_string(v.level) +
             "-PD: |N_j|=" + std::to_string(v.below_count);
    }
    if (over_threshold()) {
      return "dirt " + std::to_string(total_dirt()) + " >= " + std::to_string(dirt_threshold());
    }
    return std::nullopt;
  }

  /// Observers around each rebuild, for tests and tracing.
  RebuildHook before_rebuild;
  RebuildHook after_rebuild;

 private:
  LevelState state_;
  StaticGreedy greedy_;
  std::vector<std::uint64_t> dirt_;
  std::vector<double> inverse_powers_;
  std::size_t rebuilds_ = 0;
};

}  // namespace dynsc
