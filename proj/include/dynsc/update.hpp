#pragma once

#include <cstdint>

#include "dynsc/setsystem.hpp"

namespace dynsc {

enum class UpdateKind : std::uint8_t { kInsert, kDelete };

struct UpdateStep {
  UpdateKind kind = UpdateKind::kInsert;
  ElementId element = 0;

  static UpdateStep insert(ElementId e) { return {UpdateKind::kInsert, e}; }
  static UpdateStep erase(ElementId e) { return {UpdateKind::kDelete, e}; }

  bool is_insert() const { return kind == UpdateKind::kInsert; }

  friend bool operator==(const UpdateStep&, const UpdateStep&) = default;
};

/// Outcome of one update call.
struct StepReport {
  std::size_t cover_size = 0;
  /// |C_before Δ C_after|.
  std::size_t recourse = 0;
  /// Filled in by the experiment runner; the algorithms leave it at zero.
  std::int64_t elapsed_ns = 0;
  bool rebuild_fired = false;
};

}  // namespace dynsc
