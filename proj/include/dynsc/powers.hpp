#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace dynsc {

/// Integer thresholds for comparisons against powers of beta.
///
/// For an integer count c, "c >= beta^l" holds iff c >= ceil(beta^l), and
/// "c < beta^l" iff c < ceil(beta^l). All hot-path level tests go through
/// these thresholds instead of floating logarithms.
class PowerTable {
 public:
  PowerTable() = default;

  /// Table covering every level needed for counts up to `max_count`.
  PowerTable(double beta, std::uint64_t max_count) : beta_(beta) {
    if (!(beta > 1.0) || !std::isfinite(beta)) {
      throw std::invalid_argument("beta must be greater than 1, got " + std::to_string(beta));
    }
    // beta^l >= n is a real comparison; the ceil thresholds only decide
    // integer-vs-power tests.
    while (std::pow(static_cast<long double>(beta), cap_) < static_cast<long double>(max_count)) ++cap_;
    // Slack-1 checks look two levels past the cap.
    for (int l = 0; l <= cap_ + 2; ++l) extend();
  }

  double beta() const { return beta_; }

  /// ceil(log_beta(max_count)): the smallest l with beta^l >= max_count.
  int cap() const { return cap_; }

  /// ceil(beta^l); levels below zero map to 1.
  std::uint64_t threshold(int l) const {
    if (l < 0) return 1;
    if (static_cast<std::size_t>(l) < thresholds_.size()) return thresholds_[l];
    return compute(l);
  }

  bool at_least(std::uint64_t count, int l) const { return count >= threshold(l); }

  /// floor(log_beta(count)) for count >= 1, i.e. the largest l with
  /// beta^l <= count.
  int level_of(std::uint64_t count) const {
    if (count == 0) throw std::invalid_argument("level_of(0) is undefined; use level -1");
    auto it = std::upper_bound(thresholds_.begin(), thresholds_.end(), count);
    int l = static_cast<int>(it - thresholds_.begin()) - 1;
    if (it == thresholds_.end()) {
      while (threshold(l + 1) <= count) ++l;
    }
    return l;
  }

 private:
  std::uint64_t compute(int l) const {
    const long double v = std::ceil(std::pow(static_cast<long double>(beta_), l));
    if (v >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max()) / 2) {
      return std::numeric_limits<std::uint64_t>::max() / 2;
    }
    return static_cast<std::uint64_t>(v);
  }

  void extend() { thresholds_.push_back(compute(static_cast<int>(thresholds_.size()))); }

  double beta_ = 2.0;
  int cap_ = 0;
  std::vector<std::uint64_t> thresholds_;
};

/// floor(log_beta(count)) with exact integer comparison against powers.
inline int level_of_size(std::uint64_t count, double beta) {
  return PowerTable(beta, count == 0 ? 1 : count).level_of(count);
}

/// ceil(log_beta(n)) for n >= 1, i.e. the smallest l with beta^l >= n.
inline int ceil_log(std::uint64_t n, double beta) {
  return PowerTable(beta, n == 0 ? 1 : n).cap();
}

}  // namespace dynsc
