#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dynsc/global.hpp"
#include "dynsc/local.hpp"
#include "dynsc/oracle.hpp"
#include "dynsc/partial.hpp"
#include "dynsc/robust.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

enum class AlgorithmKind { kRobust, kLocal, kPartial, kGlobal, kNaive };

inline constexpr std::array<AlgorithmKind, 5> kAllAlgorithms = {
    AlgorithmKind::kRobust, AlgorithmKind::kLocal, AlgorithmKind::kPartial, AlgorithmKind::kGlobal,
    AlgorithmKind::kNaive};

inline std::string_view algorithm_name(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kRobust: return "robust";
    case AlgorithmKind::kLocal: return "local";
    case AlgorithmKind::kPartial: return "partial";
    case AlgorithmKind::kGlobal: return "global";
    case AlgorithmKind::kNaive: return "naive";
  }
  return "?";
}

inline AlgorithmKind parse_algorithm(std::string_view name) {
  for (auto kind : kAllAlgorithms) {
    if (algorithm_name(kind) == name) return kind;
  }
  throw std::invalid_argument("unknown algorithm '" + std::string(name) +
                              "' (expected robust, local, partial, global or naive)");
}

/// Whether beta is legal for the algorithm.
inline bool beta_allowed(AlgorithmKind kind, double beta) {
  if (kind == AlgorithmKind::kRobust) return beta > 1.0 && beta < 2.0;
  return beta > 1.0;
}

/// Reference defaults: the beta each algorithm used for the cross-algorithm
/// comparison in the original evaluation.
inline double preset_beta(AlgorithmKind kind) {
  switch (kind) {
    case AlgorithmKind::kRobust: return 1.99;
    case AlgorithmKind::kLocal: return 1.9;
    case AlgorithmKind::kPartial: return 1.99;
    case AlgorithmKind::kGlobal: return 1.495;
    case AlgorithmKind::kNaive: return 1.99;
  }
  return 1.5;
}

/// Runtime-selected maintainer.
class AnyAlgorithm {
 public:
  AnyAlgorithm(AlgorithmKind kind, const SetSystem& sys, double beta, std::size_t n_cap)
      : kind_(kind), impl_(make(kind, sys, beta, n_cap)) {}

  AlgorithmKind kind() const { return kind_; }

  StepReport update(const UpdateStep& step) {
    return std::visit([&](auto& a) { return a.update(step); }, impl_);
  }
  std::size_t cover_size() const {
    return std::visit([](const auto& a) { return a.cover_size(); }, impl_);
  }
  std::vector<SetId> cover() const {
    return std::visit([](const auto& a) { return a.cover(); }, impl_);
  }
  std::optional<std::string> check() const {
    return std::visit([](const auto& a) { return a.check(); }, impl_);
  }

  template <typename T>
  T& as() { return std::get<T>(impl_); }

 private:
  using Impl = std::variant<RobustAlgorithm, LocalAlgorithm, PartialAlgorithm, GlobalAlgorithm, NaiveAlgorithm>;

  static Impl make(AlgorithmKind kind, const SetSystem& sys, double beta, std::size_t n_cap) {
    if (!(beta > 1.0)) throw std::invalid_argument("beta must be greater than 1");
    switch (kind) {
      case AlgorithmKind::kRobust: return Impl(std::in_place_type<RobustAlgorithm>, sys, beta, n_cap);
      case AlgorithmKind::kLocal: return Impl(std::in_place_type<LocalAlgorithm>, sys, beta, n_cap);
      case AlgorithmKind::kPartial: return Impl(std::in_place_type<PartialAlgorithm>, sys, beta, n_cap);
      case AlgorithmKind::kGlobal: return Impl(std::in_place_type<GlobalAlgorithm>, sys, beta, n_cap);
      case AlgorithmKind::kNaive: return Impl(std::in_place_type<NaiveAlgorithm>, sys, beta, n_cap);
    }
    throw std::invalid_argument("unknown algorithm");
  }

  AlgorithmKind kind_;
  Impl impl_;
};

}  // namespace dynsc
