#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dynsc {

using ElementId = std::uint32_t;
using SetId = std::uint32_t;

inline constexpr SetId kNoSet = std::numeric_limits<SetId>::max();

/// Thrown when an instance file or an in-memory set family is malformed.
class InstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Immutable set family F over a fixed element id range.
///
/// Elements and sets are dense 0-based ids. `set(s)` lists the elements of s
/// in ascending order and `sets_of(e)` is its exact transpose (the sets
/// containing e, ascending). Every element lies in at least one set.
class SetSystem {
 public:
  SetSystem() = default;

  /// Builds a system from per-element incidence lists (the hypergraph view:
  /// one hyperedge per element listing the vertices, i.e. sets, it touches).
  static SetSystem from_incidence(std::size_t num_sets,
                                  std::vector<std::vector<SetId>> incidence) {
    if (incidence.empty()) throw InstanceError("no elements");
    SetSystem sys;
    sys.num_sets_ = num_sets;
    sys.elem_offsets_.reserve(incidence.size() + 1);
    sys.elem_offsets_.push_back(0);
    std::vector<std::size_t> set_sizes(num_sets, 0);
    for (std::size_t e = 0; e < incidence.size(); ++e) {
      auto& list = incidence[e];
      if (list.empty()) {
        throw InstanceError("element " + std::to_string(e + 1) +
                            " lies in no set");
      }
      std::sort(list.begin(), list.end());
      for (std::size_t i = 0; i < list.size(); ++i) {
        if (list[i] >= num_sets) {
          throw InstanceError("set id " + std::to_string(list[i] + 1) +
                              " out of range in element " +
                              std::to_string(e + 1));
        }
        if (i > 0 && list[i] == list[i - 1]) {
          throw InstanceError("duplicate vertex " + std::to_string(list[i] + 1) +
                              " in hyperedge " + std::to_string(e + 1));
        }
        ++set_sizes[list[i]];
      }
      sys.frequency_ = std::max(sys.frequency_, list.size());
      sys.elem_sets_.insert(sys.elem_sets_.end(), list.begin(), list.end());
      sys.elem_offsets_.push_back(sys.elem_sets_.size());
    }

    sys.set_offsets_.assign(num_sets + 1, 0);
    for (std::size_t s = 0; s < num_sets; ++s) {
      sys.set_offsets_[s + 1] = sys.set_offsets_[s] + set_sizes[s];
    }
    sys.set_elems_.resize(sys.elem_sets_.size());
    std::vector<std::size_t> fill(sys.set_offsets_.begin(),
                                  sys.set_offsets_.end() - 1);
    // Walking elements in ascending order keeps every set list sorted.
    for (ElementId e = 0; e < incidence.size(); ++e) {
      for (SetId s : sys.sets_of(e)) sys.set_elems_[fill[s]++] = e;
    }
    return sys;
  }

  /// Builds a system from per-set element lists.
  static SetSystem from_sets(std::size_t num_elements,
                             const std::vector<std::vector<ElementId>>& sets) {
    std::vector<std::vector<SetId>> incidence(num_elements);
    for (SetId s = 0; s < sets.size(); ++s) {
      for (ElementId e : sets[s]) {
        if (e >= num_elements) {
          throw InstanceError("element id " + std::to_string(e + 1) +
                              " out of range in set " + std::to_string(s + 1));
        }
        incidence[e].push_back(s);
      }
    }
    return from_incidence(sets.size(), std::move(incidence));
  }

  std::size_t num_elements() const { return elem_offsets_.empty() ? 0 : elem_offsets_.size() - 1; }
  std::size_t num_sets() const { return num_sets_; }

  /// Maximum number of sets any element belongs to.
  std::size_t frequency() const { return frequency_; }

  std::span<const ElementId> set(SetId s) const {
    return {set_elems_.data() + set_offsets_[s], set_offsets_[s + 1] - set_offsets_[s]};
  }

  std::span<const SetId> sets_of(ElementId e) const {
    return {elem_sets_.data() + elem_offsets_[e], elem_offsets_[e + 1] - elem_offsets_[e]};
  }

  bool contains(SetId s, ElementId e) const {
    auto members = set(s);
    return std::binary_search(members.begin(), members.end(), e);
  }

  friend bool operator==(const SetSystem&, const SetSystem&) = default;

 private:
  std::size_t num_sets_ = 0;
  std::size_t frequency_ = 0;
  std::vector<std::size_t> elem_offsets_;
  std::vector<SetId> elem_sets_;
  std::vector<std::size_t> set_offsets_;
  std::vector<ElementId> set_elems_;
};

inline std::size_t frequency_of(const SetSystem& sys) { return sys.frequency(); }

namespace detail {

inline bool parse_uint(std::string_view token, std::uint64_t& out) {
  if (token.empty()) return false;
  std::uint64_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') return false;
    if (value > (std::numeric_limits<std::uint64_t>::max() - 9) / 10) return false;
    value = value * 10 + static_cast<std::uint64_t>(c - '0');
  }
  out = value;
  return true;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

inline std::string_view strip_cr(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  return line;
}

}  // namespace detail

/// Parses the hMETIS-style instance text: optional '%' comment lines, a
/// header "<E> <V>", then E lines of 1-based vertex (set) ids, one line per
/// element.
inline SetSystem load_instance(std::string_view text) {
  std::vector<std::string_view> lines;
  {
    std::size_t start = 0;
    while (start <= text.size()) {
      std::size_t end = text.find('\n', start);
      if (end == std::string_view::npos) end = text.size();
      lines.push_back(detail::strip_cr(text.substr(start, end - start)));
      if (end == text.size()) break;
      start = end + 1;
    }
  }

  std::size_t i = 0;
  auto skip_comments = [&] {
    while (i < lines.size() && !lines[i].empty() && lines[i].front() == '%') ++i;
  };

  skip_comments();
  if (i >= lines.size()) throw InstanceError("malformed header: missing");
  auto header = detail::split_ws(lines[i]);
  std::uint64_t num_edges = 0, num_vertices = 0;
  if (header.size() != 2 || !detail::parse_uint(header[0], num_edges) ||
      !detail::parse_uint(header[1], num_vertices)) {
    throw InstanceError("malformed header: expected \"<E> <V>\"");
  }
  ++i;
  if (num_edges == 0) throw InstanceError("no elements");

  std::vector<std::vector<SetId>> incidence;
  incidence.reserve(num_edges);
  while (incidence.size() < num_edges) {
    skip_comments();
    if (i >= lines.size()) {
      throw InstanceError("expected " + std::to_string(num_edges) +
                          " hyperedge lines, found " +
                          std::to_string(incidence.size()));
    }
    auto tokens = detail::split_ws(lines[i]);
    const std::size_t elem = incidence.size() + 1;
    if (tokens.empty()) {
      throw InstanceError("empty hyperedge line for element " + std::to_string(elem));
    }
    std::vector<SetId> sets;
    sets.reserve(tokens.size());
    for (auto tok : tokens) {
      std::uint64_t v = 0;
      if (!detail::parse_uint(tok, v)) {
        throw InstanceError("malformed vertex id '" + std::string(tok) +
                            "' in hyperedge " + std::to_string(elem));
      }
      if (v == 0 || v > num_vertices) {
        throw InstanceError("vertex id " + std::to_string(v) +
                            " out of range in hyperedge " + std::to_string(elem));
      }
      sets.push_back(static_cast<SetId>(v - 1));
    }
    incidence.push_back(std::move(sets));
    ++i;
  }
  for (; i < lines.size(); ++i) {
    if (lines[i].empty() || lines[i].front() == '%') continue;
    if (!detail::split_ws(lines[i]).empty()) {
      throw InstanceError("more hyperedge lines than the header declares");
    }
  }
  return SetSystem::from_incidence(num_vertices, std::move(incidence));
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline SetSystem load_instance_file(const std::string& path) {
  return load_instance(read_file(path));
}

/// Inverse of load_instance (without comments).
inline std::string to_instance_text(const SetSystem& sys) {
  std::ostringstream out;
  out << sys.num_elements() << ' ' << sys.num_sets() << '\n';
  for (ElementId e = 0; e < sys.num_elements(); ++e) {
    bool first = true;
    for (SetId s : sys.sets_of(e)) {
      if (!first) out << ' ';
      out << s + 1;
      first = false;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace dynsc
