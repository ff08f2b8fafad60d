#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynsc/levels.hpp"
#include "dynsc/powers.hpp"
#include "dynsc/static_greedy.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// Interval-based maintainer.
///
/// Between rebuilds, an inserted element that no chosen set covers pulls in
/// its lowest-id containing set, and deletions leave the cover alone. Each
/// update decrements a countdown; when it reaches zero the greedy is rerun on
/// the whole active universe and the next interval lasts
/// max(1, ceil((beta - 1) * |C|)) steps. The countdown starts at 1 so the
/// first update sizes the first interval.
class RobustAlgorithm {
 public:
  RobustAlgorithm(const SetSystem& sys, double beta, std::size_t n_cap)
      : sys_(&sys),
        beta_(check_beta(beta)),
        n_cap_(std::max<std::size_t>(n_cap, 1)),
        powers_(beta, n_cap_),
        greedy_(sys),
        active_(sys.num_elements(), 0),
        pos_(sys.num_elements(), 0),
        in_cover_(sys.num_sets(), 0) {}

  static constexpr const char* kName = "robust";

  static double check_beta(double beta) {
    if (!(beta > 1.0 && beta < 2.0)) {
      throw std::invalid_argument("beta must lie in (1,2) for robust algorithm, got " +
                                  std::to_string(beta));
    }
    return beta;
  }

  /// Interval length that follows a rebuild producing `cover_size` sets.
  static std::size_t interval_length(double beta, std::size_t cover_size) {
    // The epsilon keeps products such as 0.9 * 10 from rounding up to 10.
    const double raw = std::ceil((beta - 1.0) * static_cast<double>(cover_size) - 1e-9);
    return std::max<std::size_t>(1, raw > 0 ? static_cast<std::size_t>(raw) : 0);
  }

  StepReport update(const UpdateStep& step) {
    const ElementId e = step.element;
    if (e >= sys_->num_elements()) throw UpdateError("element id out of range");
    StepReport report;
    std::vector<SetId> prior;
    if (countdown_ == 1) prior = cover_;
    if (step.is_insert()) {
      if (active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
      activate(e);
      const auto sets = sys_->sets_of(e);
      const bool covered = std::any_of(sets.begin(), sets.end(), [&](SetId s) { return in_cover_[s]; });
      if (!covered) {
        add_to_cover(sets.front());
        report.recourse = 1;
      }
    } else {
      if (!active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
      deactivate(e);
    }
    --countdown_;
    if (countdown_ == 0) {
      rebuild();
      report.recourse = symmetric_difference_size(prior, cover_);
      report.rebuild_fired = true;
    }
    report.cover_size = cover_.size();
    return report;
  }

  std::size_t cover_size() const { return cover_.size(); }

  std::vector<SetId> cover() const {
    auto out = cover_;
    std::sort(out.begin(), out.end());
    return out;
  }

  std::size_t countdown() const { return countdown_; }
  std::size_t rebuilds() const { return rebuilds_; }
  std::span<const ElementId> active_elements() const { return active_list_; }

  /// Every active element is covered by a chosen set.
  std::optional<std::string> check() const {
    for (ElementId e : active_list_) {
      const auto sets = sys_->sets_of(e);
      if (std::none_of(sets.begin(), sets.end(), [&](SetId s) { return in_cover_[s]; })) {
        return "element " + std::to_string(e + 1) + " is not covered";
      }
    }
    if (countdown_ < 1) return "countdown is zero after an update";
    return std::nullopt;
  }

 private:
  static std::size_t symmetric_difference_size(std::vector<SetId> a, std::vector<SetId> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    std::vector<SetId> diff;
    std::set_symmetric_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(diff));
    return diff.size();
  }

  void activate(ElementId e) {
    if (active_list_.size() >= n_cap_) {
      throw UpdateError("active element count would exceed capacity");
    }
    active_[e] = 1;
    pos_[e] = active_list_.size();
    active_list_.push_back(e);
  }

  void deactivate(ElementId e) {
    active_[e] = 0;
    const std::size_t p = pos_[e];
    active_list_[p] = active_list_.back();
    pos_[active_list_[p]] = p;
    active_list_.pop_back();
  }

  void add_to_cover(SetId s) {
    in_cover_[s] = 1;
    cover_.push_back(s);
  }

  void rebuild() {
    for (SetId s : cover_) in_cover_[s] = 0;
    cover_.clear();
    auto result = greedy_.run(active_list_, powers_);
    for (const auto& pick : result.picks) add_to_cover(pick.set);
    countdown_ = interval_length(beta_, cover_.size());
    ++rebuilds_;
  }

  const SetSystem* sys_;
  double beta_;
  std::size_t n_cap_;
  PowerTable powers_;
  StaticGreedy greedy_;
  std::vector<char> active_;
  std::vector<std::size_t> pos_;
  std::vector<ElementId> active_list_;
  std::vector<char> in_cover_;
  std::vector<SetId> cover_;
  std::size_t countdown_ = 1;
  std::size_t rebuilds_ = 0;
};

}  // namespace dynsc
