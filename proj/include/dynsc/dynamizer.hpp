#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "dynsc/setsystem.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

/// SplitMix64 (Steele, Lea, Flood). Fixed so sequences reproduce across
/// platforms.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) from the top 53 bits.
  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform index in [0, n) as next() mod n.
  std::uint64_t next_below(std::uint64_t n) { return next() % n; }

 private:
  std::uint64_t state_;
};

struct SequenceHeader {
  std::size_t elements = 0;  // x
  std::size_t capacity = 0;  // n_cap
  std::uint64_t seed = 0;
  std::size_t length = 0;  // k
  friend bool operator==(const SequenceHeader&, const SequenceHeader&) = default;
};

struct UpdateSequence {
  SequenceHeader header;
  std::vector<UpdateStep> steps;
  friend bool operator==(const UpdateSequence&, const UpdateSequence&) = default;
};

class SequenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Turns a static instance into an insert/delete workload of length 2x.
///
/// Elements are inserted in id order. With n = max(1, floor(x/10)) as the
/// capacity: below capacity, one draw picks insertion (probability 0.8) or
/// deletion of one of the up-to-five most recently inserted active elements
/// (a second draw picks which); a deletion with nothing active inserts
/// instead. At capacity, a cleanup deletes the d oldest active elements with
/// d uniform in [1, max(1, floor(n/10))]. Once every element has been
/// inserted the rest are deleted oldest first.
inline UpdateSequence dynamize(const SetSystem& sys, std::uint64_t seed) {
  const std::size_t x = sys.num_elements();
  if (x == 0) throw SequenceError("cannot dynamize an instance with no elements");
  UpdateSequence seq;
  seq.header.elements = x;
  seq.header.capacity = std::max<std::size_t>(1, x / 10);
  seq.header.seed = seed;
  seq.header.length = 2 * x;
  seq.steps.reserve(2 * x);

  const std::size_t cap = seq.header.capacity;
  const std::size_t cleanup_max = std::max<std::size_t>(1, cap / 10);
  SplitMix64 rng(seed);
  std::deque<ElementId> active;  // insertion order, oldest first
  ElementId next = 0;

  auto insert = [&] {
    seq.steps.push_back(UpdateStep::insert(next));
    active.push_back(next);
    ++next;
  };
  auto erase_at = [&](std::size_t pos) {
    seq.steps.push_back(UpdateStep::erase(active[pos]));
    active.erase(active.begin() + static_cast<std::ptrdiff_t>(pos));
  };

  while (next < x) {
    if (active.size() >= cap) {
      const std::size_t d = 1 + rng.next_below(cleanup_max);
      for (std::size_t i = 0; i < d && !active.empty(); ++i) erase_at(0);
      continue;
    }
    const bool want_insert = rng.next_unit() < 0.8;
    if (want_insert || active.empty()) {
      insert();
      continue;
    }
    const std::size_t window = std::min<std::size_t>(5, active.size());
    const std::size_t pick = rng.next_below(window);
    erase_at(active.size() - 1 - pick);
  }
  while (!active.empty()) erase_at(0);
  return seq;
}

/// Checks every structural property of a sequence against its instance.
/// Returns the first violation, or nullopt when the sequence is valid.
inline std::optional<std::string> validate_sequence(const UpdateSequence& seq, const SetSystem& sys) {
  const auto& h = seq.header;
  if (h.elements != sys.num_elements()) {
    return "header x=" + std::to_string(h.elements) + " but instance has " +
           std::to_string(sys.num_elements()) + " elements";
  }
  std::vector<char> state(sys.num_elements(), 0);  // 0 fresh, 1 active, 2 deleted
  std::size_t active = 0;
  ElementId expected_insert = 0;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    const auto& step = seq.steps[i];
    const std::string at = " at step " + std::to_string(i + 1);
    if (step.element >= sys.num_elements()) return "element id out of range" + at;
    const std::string name = "element " + std::to_string(step.element + 1);
    if (step.is_insert()) {
      if (state[step.element] != 0) return name + " inserted twice" + at;
      if (step.element != expected_insert) return name + " inserted out of order" + at;
      ++expected_insert;
      state[step.element] = 1;
      if (++active > h.capacity) return "active count exceeds capacity" + at;
    } else {
      if (state[step.element] == 0) return name + " deleted before insertion" + at;
      if (state[step.element] == 2) return name + " deleted twice" + at;
      state[step.element] = 2;
      --active;
    }
  }
  if (active != 0) return std::string("sequence does not end empty");
  if (h.length != seq.steps.size()) {
    return "header k=" + std::to_string(h.length) + " but sequence has " + std::to_string(seq.steps.size()) +
           " steps";
  }
  if (seq.steps.size() != 2 * sys.num_elements()) return std::string("sequence length is not 2x");
  return std::nullopt;
}

/// Header line "# x=<x> cap=<n_cap> seed=<seed> k=<k>", then "+ <id>" or
/// "- <id>" per step with 1-based ids.
inline std::string to_sequence_text(const UpdateSequence& seq) {
  std::ostringstream out;
  out << "# x=" << seq.header.elements << " cap=" << seq.header.capacity << " seed=" << seq.header.seed
      << " k=" << seq.header.length << '\n';
  for (const auto& step : seq.steps) out << (step.is_insert() ? '+' : '-') << ' ' << step.element + 1 << '\n';
  return out.str();
}

inline UpdateSequence parse_sequence(std::string_view text) {
  UpdateSequence seq;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw SequenceError("empty sequence file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream hdr(line);
    std::string hash, fx, fcap, fseed, fk;
    if (!(hdr >> hash >> fx >> fcap >> fseed >> fk) || hash != "#") {
      throw SequenceError("malformed sequence header");
    }
    auto field = [](const std::string& token, std::string_view key) -> std::uint64_t {
      if (token.rfind(key, 0) != 0) throw SequenceError("malformed sequence header field '" + token + "'");
      std::uint64_t v = 0;
      if (!detail::parse_uint(std::string_view(token).substr(key.size()), v)) {
        throw SequenceError("malformed sequence header field '" + token + "'");
      }
      return v;
    };
    seq.header.elements = field(fx, "x=");
    seq.header.capacity = field(fcap, "cap=");
    seq.header.seed = field(fseed, "seed=");
    seq.header.length = field(fk, "k=");
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.size() < 3 || (line[0] != '+' && line[0] != '-') || line[1] != ' ') {
      throw SequenceError("malformed step on line " + std::to_string(lineno));
    }
    std::uint64_t id = 0;
    if (!detail::parse_uint(std::string_view(line).substr(2), id) || id == 0) {
      throw SequenceError("malformed element id on line " + std::to_string(lineno));
    }
    const auto e = static_cast<ElementId>(id - 1);
    seq.steps.push_back(line[0] == '+' ? UpdateStep::insert(e) : UpdateStep::erase(e));
  }
  return seq;
}

inline UpdateSequence load_sequence_file(const std::string& path) { return parse_sequence(read_file(path)); }

}  // namespace dynsc
