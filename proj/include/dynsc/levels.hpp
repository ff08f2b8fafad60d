#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "dynsc/powers.hpp"
#include "dynsc/setsystem.hpp"
#include "dynsc/static_greedy.hpp"

namespace dynsc {

/// Thrown on an insertion of an active element or a deletion of an inactive one.
class UpdateError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PropertyViolation1 {
  SetId set;
  std::size_t cov_size;
  int level;
  friend bool operator==(const PropertyViolation1&, const PropertyViolation1&) = default;
};

struct PropertyViolation2 {
  SetId set;
  int level;
  std::size_t below_count;
  friend bool operator==(const PropertyViolation2&, const PropertyViolation2&) = default;
};

struct PropertyReport {
  std::vector<PropertyViolation1> property1_violations;
  std::vector<PropertyViolation2> property2_violations;
  bool passed() const { return property1_violations.empty() && property2_violations.empty(); }
};

struct RebuildReport {
  std::size_t elements_rebuilt = 0;
  std::vector<SetId> sets_touched;
  /// The rebuilt elements, in the order they were collected.
  std::vector<ElementId> elements;
};

/// Assignment of active elements to covering sets, with levels.
///
/// cov(s) partitions the active elements; every element sits at the level of
/// the set that owns it, and a set is at level -1 exactly when its cov is
/// empty. For every set the state also keeps a histogram of the levels of
/// its active elements, so |N_j(s)| is a prefix sum.
///
/// The number of levels is fixed by the capacity bound n_cap given at
/// construction: levels run from 0 to ceil(log_beta n_cap).
class LevelState {
 public:
  LevelState(const SetSystem& sys, double beta, std::size_t n_cap)
      : sys_(&sys),
        powers_(beta, std::max<std::size_t>(n_cap, 1)),
        n_cap_(std::max<std::size_t>(n_cap, 1)),
        level_cap_(powers_.cap()),
        active_(sys.num_elements(), 0),
        asn_(sys.num_elements(), kNoSet),
        pos_in_cov_(sys.num_elements(), 0),
        cov_(sys.num_sets()),
        set_level_(sys.num_sets(), -1),
        pos_in_level_(sys.num_sets(), 0),
        level_sets_(static_cast<std::size_t>(level_cap_) + 1),
        hist_(sys.num_sets() * (static_cast<std::size_t>(level_cap_) + 1), 0),
        journal_stamp_(sys.num_sets(), 0),
        journal_initial_(sys.num_sets(), 0) {}

  const SetSystem& system() const { return *sys_; }
  const PowerTable& powers() const { return powers_; }
  double beta() const { return powers_.beta(); }
  int level_cap() const { return level_cap_; }
  std::size_t capacity() const { return n_cap_; }

  bool is_active(ElementId e) const { return active_[e] != 0; }
  std::size_t active_count() const { return active_count_; }
  SetId asn(ElementId e) const { return asn_[e]; }
  int set_level(SetId s) const { return set_level_[s]; }

  /// Level of an element; -1 while it is inactive or detached.
  int elem_level(ElementId e) const {
    return asn_[e] == kNoSet ? -1 : set_level_[asn_[e]];
  }

  std::span<const ElementId> cov(SetId s) const { return cov_[s]; }

  /// level_hist[s][l] for l in [0, level_cap].
  std::span<const std::uint32_t> histogram(SetId s) const {
    return {hist_.data() + s * stride(), stride()};
  }

  std::size_t cover_size() const { return cover_size_; }

  std::span<const SetId> sets_at_level(int l) const { return level_sets_[l]; }

  /// |{s in C : lev(s) <= level}|.
  std::size_t cover_sets_at_or_below(int level) const {
    std::size_t total = 0;
    for (int l = 0; l <= std::min(level, level_cap_); ++l) total += level_sets_[l].size();
    return total;
  }

  /// |N_j(s)| = |{e in s, active : lev(e) < j}|.
  std::size_t nj_count(SetId s, int j) const {
    auto h = histogram(s);
    std::size_t total = 0;
    for (int l = 0; l < std::min(j, level_cap_ + 1); ++l) total += h[l];
    return total;
  }

  /// Sets with non-empty cov, ascending.
  std::vector<SetId> cover() const {
    std::vector<SetId> out;
    out.reserve(cover_size_);
    for (const auto& bucket : level_sets_) out.insert(out.end(), bucket.begin(), bucket.end());
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Activates e and places it in cov(s). A set with empty cov is moved to
  /// `level_if_empty` first.
  void insert(ElementId e, SetId s, int level_if_empty = 0) {
    if (active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
    if (active_count_ >= n_cap_) {
      throw UpdateError("active element count would exceed capacity " + std::to_string(n_cap_));
    }
    active_[e] = 1;
    ++active_count_;
    attach(e, s, level_if_empty);
  }

  /// Deactivates e; returns the set that owned it and the level it had.
  std::pair<SetId, int> erase(ElementId e) {
    if (!active_[e]) throw UpdateError("element " + std::to_string(e + 1) + " is not active");
    const SetId owner = asn_[e];
    const int level = elem_level(e);
    detach(e);
    active_[e] = 0;
    --active_count_;
    return {owner, level};
  }

  /// Moves active e into cov(s); it adopts s's level.
  void move(ElementId e, SetId s, int level_if_empty = 0) {
    if (asn_[e] == s) return;
    detach(e);
    attach(e, s, level_if_empty);
  }

  /// Puts a set with non-empty cov at a new level; its cov follows.
  void relevel(SetId s, int level) {
    const int old = set_level_[s];
    if (old == level) return;
    if (cov_[s].empty()) throw std::logic_error("relevel of a set with empty cov");
    check_level(level);
    unlist_level(s);
    set_level_[s] = level;
    list_level(s);
    for (ElementId e : cov_[s]) shift_hist(e, old, level);
  }

  /// Clears cov of every set at level <= i_crit and reassigns those elements
  /// with a greedy run over all sets intersecting them. A chosen set that
  /// still owns elements above i_crit keeps its level and absorbs the new
  /// elements at that level, so nothing above i_crit moves.
  RebuildReport rebuild_below(int i_crit, StaticGreedy& greedy) {
    i_crit = std::clamp(i_crit, -1, level_cap_);
    RebuildReport report;
    std::vector<SetId> cleared;
    for (int l = 0; l <= i_crit; ++l) {
      cleared.insert(cleared.end(), level_sets_[l].begin(), level_sets_[l].end());
    }
    for (SetId s : cleared) {
      for (ElementId e : cov_[s]) report.elements.push_back(e);
      clear_set(s);
    }
    report.elements_rebuilt = report.elements.size();
    auto result = greedy.run(report.elements, powers_);
    for (auto& pick : result.picks) {
      const int level = cov_[pick.set].empty() ? pick.level : set_level_[pick.set];
      for (ElementId e : pick.elements) attach(e, pick.set, level);
    }
    report.sets_touched = std::move(cleared);
    for (const auto& pick : result.picks) report.sets_touched.push_back(pick.set);
    std::sort(report.sets_touched.begin(), report.sets_touched.end());
    report.sets_touched.erase(std::unique(report.sets_touched.begin(), report.sets_touched.end()),
                              report.sets_touched.end());
    return report;
  }

  /// Deactivates everything.
  void clear() {
    for (auto& bucket : level_sets_) {
      auto sets = bucket;
      for (SetId s : sets) {
        auto elems = cov_[s];
        for (ElementId e : elems) {
          detach(e);
          active_[e] = 0;
          --active_count_;
        }
      }
    }
  }

  /// Starts recording cover membership flips for recourse accounting.
  void begin_step() {
    if (++journal_epoch_ == 0) {
      std::fill(journal_stamp_.begin(), journal_stamp_.end(), 0);
      journal_epoch_ = 1;
    }
    journal_.clear();
  }

  /// |C_before Δ C_after| since begin_step().
  std::size_t end_step() const {
    std::size_t flips = 0;
    for (SetId s : journal_) {
      if (journal_initial_[s] != (cov_[s].empty() ? 0 : 1)) ++flips;
    }
    return flips;
  }

  /// Recomputes everything derivable from cov and compares. Returns a
  /// description of the first inconsistency.
  std::optional<std::string> validate() const {
    std::ostringstream msg;
    std::vector<SetId> owner(sys_->num_elements(), kNoSet);
    std::size_t covered = 0, nonempty = 0;
    for (SetId s = 0; s < sys_->num_sets(); ++s) {
      if (cov_[s].empty() != (set_level_[s] == -1)) {
        msg << "set " << s + 1 << " has level " << set_level_[s] << " with |cov|=" << cov_[s].size();
        return msg.str();
      }
      if (!cov_[s].empty()) {
        ++nonempty;
        if (set_level_[s] > level_cap_) {
          msg << "set " << s + 1 << " above level cap";
          return msg.str();
        }
      }
      for (std::size_t i = 0; i < cov_[s].size(); ++i) {
        const ElementId e = cov_[s][i];
        if (!sys_->contains(s, e)) {
          msg << "element " << e + 1 << " in cov of set " << s + 1 << " but not in the set";
          return msg.str();
        }
        if (owner[e] != kNoSet) {
          msg << "element " << e + 1 << " in two covs";
          return msg.str();
        }
        owner[e] = s;
        ++covered;
        if (asn_[e] != s || pos_in_cov_[e] != i) {
          msg << "asn/position of element " << e + 1 << " disagrees with cov";
          return msg.str();
        }
      }
    }
    std::size_t active = 0;
    for (ElementId e = 0; e < sys_->num_elements(); ++e) {
      if (active_[e]) ++active;
      if ((owner[e] != kNoSet) != (active_[e] != 0)) {
        msg << "element " << e + 1 << (active_[e] ? " is active but unowned" : " is owned but inactive");
        return msg.str();
      }
      if (!active_[e] && asn_[e] != kNoSet) {
        msg << "inactive element " << e + 1 << " has an asn";
        return msg.str();
      }
    }
    if (active != active_count_ || covered != active) {
      msg << "active count mismatch";
      return msg.str();
    }
    if (nonempty != cover_size_) {
      msg << "cover size counter " << cover_size_ << " != " << nonempty;
      return msg.str();
    }
    std::size_t listed = 0;
    for (int l = 0; l <= level_cap_; ++l) {
      for (std::size_t i = 0; i < level_sets_[l].size(); ++i) {
        const SetId s = level_sets_[l][i];
        if (set_level_[s] != l || pos_in_level_[s] != i) {
          msg << "level list entry for set " << s + 1 << " is stale";
          return msg.str();
        }
        ++listed;
      }
    }
    if (listed != nonempty) {
      msg << "level lists hold " << listed << " sets, expected " << nonempty;
      return msg.str();
    }
    std::vector<std::uint32_t> expect(stride());
    for (SetId s = 0; s < sys_->num_sets(); ++s) {
      std::fill(expect.begin(), expect.end(), 0);
      std::size_t in_set = 0;
      for (ElementId e : sys_->set(s)) {
        if (!active_[e]) continue;
        ++in_set;
        ++expect[set_level_[owner[e]]];
      }
      auto h = histogram(s);
      std::size_t sum = 0;
      for (std::size_t l = 0; l < stride(); ++l) {
        sum += h[l];
        if (h[l] != expect[l]) {
          msg << "histogram of set " << s + 1 << " at level " << l << " is " << h[l]
              << ", expected " << expect[l];
          return msg.str();
        }
      }
      if (sum != in_set) {
        msg << "histogram of set " << s + 1 << " does not sum to |s ∩ U|";
        return msg.str();
      }
    }
    return std::nullopt;
  }

 private:
  std::size_t stride() const { return static_cast<std::size_t>(level_cap_) + 1; }

  void check_level(int level) const {
    if (level < 0 || level > level_cap_) {
      throw std::logic_error("level " + std::to_string(level) + " outside [0, " +
                             std::to_string(level_cap_) + "]");
    }
  }

  void journal(SetId s) {
    if (journal_stamp_[s] == journal_epoch_) return;
    journal_stamp_[s] = journal_epoch_;
    journal_initial_[s] = cov_[s].empty() ? 0 : 1;
    journal_.push_back(s);
  }

  void list_level(SetId s) {
    auto& bucket = level_sets_[set_level_[s]];
    pos_in_level_[s] = bucket.size();
    bucket.push_back(s);
  }

  void unlist_level(SetId s) {
    auto& bucket = level_sets_[set_level_[s]];
    const std::size_t pos = pos_in_level_[s];
    bucket[pos] = bucket.back();
    pos_in_level_[bucket[pos]] = pos;
    bucket.pop_back();
  }

  void shift_hist(ElementId e, int from, int to) {
    for (SetId t : sys_->sets_of(e)) {
      auto* h = hist_.data() + t * stride();
      if (from >= 0) --h[from];
      if (to >= 0) ++h[to];
    }
  }

  // Element e is active and unowned; give it to s.
  void attach(ElementId e, SetId s, int level_if_empty) {
    if (!sys_->contains(s, e)) {
      throw std::logic_error("set " + std::to_string(s + 1) + " does not contain element " +
                             std::to_string(e + 1));
    }
    if (cov_[s].empty()) {
      check_level(level_if_empty);
      journal(s);
      set_level_[s] = level_if_empty;
      list_level(s);
      ++cover_size_;
    }
    asn_[e] = s;
    pos_in_cov_[e] = cov_[s].size();
    cov_[s].push_back(e);
    shift_hist(e, -1, set_level_[s]);
  }

  // Element e leaves its cov; stays active but unowned.
  void detach(ElementId e) {
    const SetId s = asn_[e];
    auto& members = cov_[s];
    if (members.size() == 1) journal(s);  // record membership before it flips
    shift_hist(e, set_level_[s], -1);
    const std::size_t pos = pos_in_cov_[e];
    members[pos] = members.back();
    pos_in_cov_[members[pos]] = pos;
    members.pop_back();
    asn_[e] = kNoSet;
    if (members.empty()) {
      unlist_level(s);
      set_level_[s] = -1;
      --cover_size_;
    }
  }

  void clear_set(SetId s) {
    while (!cov_[s].empty()) detach(cov_[s].back());
  }

  const SetSystem* sys_;
  PowerTable powers_;
  std::size_t n_cap_;
  int level_cap_;
  std::vector<char> active_;
  std::size_t active_count_ = 0;
  std::vector<SetId> asn_;
  std::vector<std::size_t> pos_in_cov_;
  std::vector<std::vector<ElementId>> cov_;
  std::vector<int> set_level_;
  std::vector<std::size_t> pos_in_level_;
  std::vector<std::vector<SetId>> level_sets_;
  std::vector<std::uint32_t> hist_;
  std::size_t cover_size_ = 0;

  std::uint32_t journal_epoch_ = 0;
  std::vector<std::uint32_t> journal_stamp_;
  std::vector<char> journal_initial_;
  std::vector<SetId> journal_;
};

/// floor(log_beta count) with the level -1 convention rejected.
inline int level_of_size(std::uint64_t count, const LevelState& state) {
  return state.powers().level_of(count);
}

inline std::size_t nj_count(const LevelState& state, SetId s, int j) { return state.nj_count(s, j); }

inline std::vector<SetId> cover_of(const LevelState& state) { return state.cover(); }

/// Checks the two greedy level properties with optional slack:
///   1. |cov(s)| >= beta^(lev(s) - slack_nd) for every s with non-empty cov;
///   2. |N_j(s)| <  beta^(j + slack_pd) for every s and 0 <= j <= level_cap.
inline PropertyReport check_properties(const LevelState& state, int slack_nd, int slack_pd) {
  PropertyReport report;
  const auto& powers = state.powers();
  const auto& sys = state.system();
  for (SetId s = 0; s < sys.num_sets(); ++s) {
    const auto cov_size = state.cov(s).size();
    if (cov_size > 0 && !powers.at_least(cov_size, state.set_level(s) - slack_nd)) {
      report.property1_violations.push_back({s, cov_size, state.set_level(s)});
    }
    auto h = state.histogram(s);
    std::size_t below = 0;
    for (int j = 0; j <= state.level_cap(); ++j) {
      if (j > 0) below += h[j - 1];
      if (powers.at_least(below, j + slack_pd)) report.property2_violations.push_back({s, j, below});
    }
  }
  return report;
}

/// Runs the greedy over `elements` (all inactive in `state`) with the given
/// candidate sets and records the resulting assignment in `state`.
inline std::vector<SetId> static_greedy(LevelState& state, StaticGreedy& greedy,
                                        std::span<const ElementId> elements,
                                        std::span<const SetId> candidates) {
  if (elements.empty()) return {};
  for (ElementId e : elements) {
    if (state.is_active(e)) throw UpdateError("element " + std::to_string(e + 1) + " is already active");
  }
  if (state.active_count() + elements.size() > state.capacity()) {
    throw UpdateError("greedy universe exceeds the state's capacity");
  }
  auto result = greedy.run(elements, candidates, state.powers());
  for (const auto& pick : result.picks) {
    for (ElementId e : pick.elements) state.insert(e, pick.set, pick.level);
  }
  return result.cover();
}

}  // namespace dynsc
