#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "dynsc/powers.hpp"
#include "dynsc/setsystem.hpp"

namespace dynsc {

/// One set added by the greedy run: the level it was added from and the
/// uncovered elements it claimed (its cov).
struct GreedyPick {
  SetId set = kNoSet;
  int level = -1;
  std::vector<ElementId> elements;
};

struct GreedyResult {
  std::vector<GreedyPick> picks;
  /// Number of times a set was taken from a level queue.
  std::size_t set_touches = 0;

  std::vector<SetId> cover() const {
    std::vector<SetId> out;
    out.reserve(picks.size());
    for (const auto& p : picks) out.push_back(p.set);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Level-bucketed relaxed greedy.
///
/// Candidate sets start at level floor(log_beta |s ∩ E|). Levels are scanned
/// from ceil(log_beta |E|) down to 0; a set taken from level l is added when
/// it still has at least beta^l uncovered elements and otherwise moves
/// straight to the highest level its uncovered count supports (or is dropped
/// once it has none). Within a level sets are taken in ascending id order,
/// demoted arrivals included: demotions only target lower levels, so a
/// level's queue is complete by the time the scan reaches it.
///
/// The object owns scratch arrays sized to the system so that repeated runs
/// over small element subsets cost time proportional to the subset, not to
/// the whole instance.
class StaticGreedy {
 public:
  explicit StaticGreedy(const SetSystem& sys)
      : sys_(&sys),
        elem_stamp_(sys.num_elements(), 0),
        covered_stamp_(sys.num_elements(), 0),
        set_stamp_(sys.num_sets(), 0),
        uncovered_(sys.num_sets(), 0),
        members_(sys.num_sets()) {}

  /// Runs over `elements` with every set that intersects them as candidate.
  GreedyResult run(std::span<const ElementId> elements, const PowerTable& powers) {
    begin(elements);
    std::vector<SetId> candidates;
    for (ElementId e : elements) {
      for (SetId s : sys_->sets_of(e)) {
        if (set_stamp_[s] != epoch_) {
          set_stamp_[s] = epoch_;
          candidates.push_back(s);
        }
      }
    }
    std::sort(candidates.begin(), candidates.end());
    return solve(elements, candidates, powers);
  }

  /// Runs over `elements` restricted to the given candidate sets.
  GreedyResult run(std::span<const ElementId> elements, std::span<const SetId> candidate_sets,
                   const PowerTable& powers) {
    begin(elements);
    std::vector<SetId> candidates;
    candidates.reserve(candidate_sets.size());
    for (SetId s : candidate_sets) {
      if (s >= sys_->num_sets()) {
        throw std::invalid_argument("candidate set id " + std::to_string(s + 1) + " out of range");
      }
      if (set_stamp_[s] != epoch_) {
        set_stamp_[s] = epoch_;
        candidates.push_back(s);
      }
    }
    std::sort(candidates.begin(), candidates.end());
    return solve(elements, candidates, powers);
  }

 private:
  void begin(std::span<const ElementId> elements) {
    if (++epoch_ == 0) {
      std::fill(elem_stamp_.begin(), elem_stamp_.end(), 0);
      std::fill(covered_stamp_.begin(), covered_stamp_.end(), 0);
      std::fill(set_stamp_.begin(), set_stamp_.end(), 0);
      epoch_ = 1;
    }
    for (ElementId e : elements) {
      if (e >= sys_->num_elements()) {
        throw std::invalid_argument("element id " + std::to_string(e + 1) + " out of range");
      }
      if (elem_stamp_[e] == epoch_) {
        throw std::invalid_argument("element " + std::to_string(e + 1) + " listed twice");
      }
      elem_stamp_[e] = epoch_;
    }
  }

  GreedyResult solve(std::span<const ElementId> elements, std::span<const SetId> candidates,
                     const PowerTable& powers) {
    GreedyResult result;
    if (elements.empty()) return result;

    for (SetId s : candidates) {
      uncovered_[s] = 0;
      members_[s].clear();
    }
    for (ElementId e : elements) {
      bool coverable = false;
      for (SetId s : sys_->sets_of(e)) {
        if (set_stamp_[s] != epoch_) continue;
        coverable = true;
        ++uncovered_[s];
        members_[s].push_back(e);
      }
      if (!coverable) {
        throw std::invalid_argument("element " + std::to_string(e + 1) +
                                    " is not contained in any candidate set");
      }
    }

    // No candidate can start above floor(log_beta |E|).
    const int top = powers.level_of(elements.size());
    std::vector<std::vector<SetId>> queues(static_cast<std::size_t>(top) + 1);
    for (SetId s : candidates) {
      if (uncovered_[s] > 0) queues[powers.level_of(uncovered_[s])].push_back(s);
    }

    for (int l = top; l >= 0; --l) {
      auto& queue = queues[l];
      std::sort(queue.begin(), queue.end());
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const SetId s = queue[head];
        ++result.set_touches;
        const std::uint64_t count = uncovered_[s];
        if (powers.at_least(count, l)) {
          GreedyPick pick{s, l, {}};
          pick.elements.reserve(count);
          for (ElementId e : members_[s]) {
            if (covered_stamp_[e] == epoch_) continue;
            covered_stamp_[e] = epoch_;
            pick.elements.push_back(e);
            for (SetId t : sys_->sets_of(e)) {
              if (set_stamp_[t] == epoch_) --uncovered_[t];
            }
          }
          result.picks.push_back(std::move(pick));
        } else if (count > 0) {
          queues[powers.level_of(count)].push_back(s);
        }
      }
      queue.clear();
    }
    for (SetId s : candidates) members_[s].clear();
    return result;
  }

  const SetSystem* sys_;
  std::uint32_t epoch_ = 0;
  std::vector<std::uint32_t> elem_stamp_;
  std::vector<std::uint32_t> covered_stamp_;
  std::vector<std::uint32_t> set_stamp_;
  std::vector<std::uint64_t> uncovered_;
  std::vector<std::vector<ElementId>> members_;
};

}  // namespace dynsc
