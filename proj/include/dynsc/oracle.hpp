#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynsc/levels.hpp"
#include "dynsc/powers.hpp"
#include "dynsc/setsystem.hpp"
#include "dynsc/static_greedy.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// Hard limits for the exact solver. Exceeding them is an error, never an
/// approximation.
struct OracleBudget {
  std::size_t elements = 20;
  std::size_t sets = 24;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace detail {

class ExactCover {
 public:
  ExactCover(std::vector<std::uint32_t> masks, std::uint32_t full) : masks_(std::move(masks)), full_(full) {
    const int bits = std::popcount(full);
    by_element_.resize(static_cast<std::size_t>(bits));
    for (std::size_t s = 0; s < masks_.size(); ++s) {
      for (int b = 0; b < bits; ++b) {
        if (masks_[s] >> b & 1u) by_element_[b].push_back(static_cast<std::uint32_t>(s));
      }
    }
  }

  std::size_t solve(std::size_t upper_bound) {
    best_ = upper_bound;
    search(0, 0);
    return best_;
  }

 private:
  void search(std::uint32_t covered, std::size_t used) {
    if (covered == full_) {
      best_ = std::min(best_, used);
      return;
    }
    if (used + 1 >= best_) return;
    const std::uint32_t open = full_ & ~covered;
    // Lower bound: remaining elements over the best single-set gain.
    int max_gain = 0;
    for (auto m : masks_) max_gain = std::max(max_gain, std::popcount(m & open));
    const int remaining = std::popcount(open);
    if (used + static_cast<std::size_t>((remaining + max_gain - 1) / max_gain) >= best_) return;

    // Branch on the open element with the fewest containing sets.
    int pivot = -1;
    std::size_t fewest = SIZE_MAX;
    for (std::uint32_t rest = open; rest != 0; rest &= rest - 1) {
      const int b = std::countr_zero(rest);
      if (by_element_[b].size() < fewest) {
        fewest = by_element_[b].size();
        pivot = b;
      }
    }
    for (std::uint32_t s : by_element_[pivot]) search(covered | masks_[s], used + 1);
  }

  std::vector<std::uint32_t> masks_;
  std::uint32_t full_;
  std::vector<std::vector<std::uint32_t>> by_element_;
  std::size_t best_ = 0;
};

}  // namespace detail

/// Classic greedy: repeatedly add a set covering the most uncovered
/// elements (lowest id on ties). Used only as a comparator and as the
/// initial upper bound of the exact search.
inline std::vector<SetId> classic_greedy(const SetSystem& sys, std::span<const ElementId> universe) {
  std::vector<char> open(sys.num_elements(), 0);
  std::size_t remaining = 0;
  for (ElementId e : universe) {
    if (!open[e]) ++remaining;
    open[e] = 1;
  }
  std::vector<SetId> chosen;
  while (remaining > 0) {
    SetId best = kNoSet;
    std::size_t best_gain = 0;
    for (SetId s = 0; s < sys.num_sets(); ++s) {
      std::size_t gain = 0;
      for (ElementId e : sys.set(s)) gain += open[e];
      if (gain > best_gain) {
        best_gain = gain;
        best = s;
      }
    }
    chosen.push_back(best);
    for (ElementId e : sys.set(best)) {
      if (open[e]) {
        open[e] = 0;
        --remaining;
      }
    }
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

/// Exact minimum number of sets covering `universe`, by branch and bound.
inline std::size_t opt_cover(const SetSystem& sys, std::span<const ElementId> universe,
                             OracleBudget budget = {}) {
  std::vector<ElementId> elems(universe.begin(), universe.end());
  std::sort(elems.begin(), elems.end());
  elems.erase(std::unique(elems.begin(), elems.end()), elems.end());
  if (elems.empty()) return 0;
  if (elems.size() > budget.elements || elems.size() > 32) {
    throw BudgetExceeded("oracle budget exceeded: " + std::to_string(elems.size()) + " elements > " +
                         std::to_string(budget.elements));
  }
  std::vector<SetId> candidates;
  for (ElementId e : elems) {
    if (e >= sys.num_elements()) throw std::invalid_argument("element id out of range");
    for (SetId s : sys.sets_of(e)) candidates.push_back(s);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  if (candidates.size() > budget.sets) {
    throw BudgetExceeded("oracle budget exceeded: " + std::to_string(candidates.size()) + " sets > " +
                         std::to_string(budget.sets));
  }
  std::vector<std::uint32_t> masks;
  for (SetId s : candidates) {
    std::uint32_t mask = 0;
    for (std::size_t b = 0; b < elems.size(); ++b) {
      if (sys.contains(s, elems[b])) mask |= 1u << b;
    }
    masks.push_back(mask);
  }
  const std::uint32_t full = elems.size() == 32 ? ~0u : (1u << elems.size()) - 1;
  const std::size_t upper = classic_greedy(sys, elems).size();
  return detail::ExactCover(std::move(masks), full).solve(upper);
}

/// Reruns the greedy from scratch after every update.
class NaiveAlgorithm {
 public:
  NaiveAlgorithm(const SetSystem& sys, double beta, std::size_t n_cap)
      : sys_(&sys),
        n_cap_(std::max<std::size_t>(n_cap, 1)),
        powers_(beta, n_cap_),
        greedy_(sys),
        active_(sys.num_elements(), 0),
        pos_(sys.num_elements(), 0) {}

  static constexpr const char* kName = "naive";

  StepReport update(const UpdateStep& step) {
    const ElementId e = step.element;
    if (e >= sys_->num_elements()) throw UpdateError("element id out of range");
    if (step.is_insert()) {
      if (active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
      if (active_list_.size() >= n_cap_) throw UpdateError("active element count would exceed capacity");
      active_[e] = 1;
      pos_[e] = active_list_.size();
      active_list_.push_back(e);
    } else {
      if (!active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
      active_[e] = 0;
      const std::size_t p = pos_[e];
      active_list_[p] = active_list_.back();
      pos_[active_list_[p]] = p;
      active_list_.pop_back();
    }
    auto next = greedy_.run(active_list_, powers_).cover();
    std::vector<SetId> diff;
    std::set_symmetric_difference(cover_.begin(), cover_.end(), next.begin(), next.end(), std::back_inserter(diff));
    cover_ = std::move(next);
    StepReport report;
    report.cover_size = cover_.size();
    report.recourse = diff.size();
    report.rebuild_fired = true;
    return report;
  }

  std::size_t cover_size() const { return cover_.size(); }
  std::vector<SetId> cover() const { return cover_; }
  std::span<const ElementId> active_elements() const { return active_list_; }

  std::optional<std::string> check() const {
    for (ElementId e : active_list_) {
      const auto sets = sys_->sets_of(e);
      const bool covered = std::any_of(sets.begin(), sets.end(), [&](SetId s) {
        return std::binary_search(cover_.begin(), cover_.end(), s);
      });
      if (!covered) return "element " + std::to_string(e + 1) + " is not covered";
    }
    return std::nullopt;
  }

 private:
  const SetSystem* sys_;
  std::size_t n_cap_;
  PowerTable powers_;
  StaticGreedy greedy_;
  std::vector<char> active_;
  std::vector<std::size_t> pos_;
  std::vector<ElementId> active_list_;
  std::vector<SetId> cover_;
};

}  // namespace dynsc
