#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <system_error>
#include <thread>
#include <tuple>
#include <vector>

#include "dynsc/algorithms.hpp"
#include "dynsc/dynamizer.hpp"
#include "dynsc/setsystem.hpp"
#include "dynsc/update.hpp"

namespace dynsc {

enum class Metric { kSize, kTime, kRecourse };

inline std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::kSize: return "size";
    case Metric::kTime: return "time";
    case Metric::kRecourse: return "recourse";
  }
  return "?";
}

inline Metric parse_metric(std::string_view name) {
  if (name == "size") return Metric::kSize;
  if (name == "time") return Metric::kTime;
  if (name == "recourse") return Metric::kRecourse;
  throw std::invalid_argument("unknown metric '" + std::string(name) + "' (expected size, time or recourse)");
}

/// One run of one algorithm over one sequence, averaged over its steps.
struct MetricsRecord {
  std::string instance;
  std::string algo;
  double beta = 0.0;
  std::size_t rep = 0;
  std::size_t steps = 0;
  double amortized_size = 0.0;
  double amortized_time_ns = 0.0;
  double amortized_recourse = 0.0;

  double value(Metric m) const {
    switch (m) {
      case Metric::kSize: return amortized_size;
      case Metric::kTime: return amortized_time_ns;
      case Metric::kRecourse: return amortized_recourse;
    }
    return 0.0;
  }
};

/// Failure inside a run, tagged with the 1-based step where it happened.
class ExperimentError : public std::runtime_error {
 public:
  ExperimentError(std::size_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}
  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

struct ExperimentOptions {
  /// Validate every invariant after each step (outside the timed region).
  bool checking = false;
  /// Keep the per-step reports in the result.
  bool keep_steps = false;
  std::string instance;
  std::size_t rep = 0;
};

struct ExperimentResult {
  MetricsRecord record;
  std::vector<StepReport> steps;
};

/// Replays `seq` through the chosen algorithm, timing each update call.
/// Rebuild costs land on the step that triggered them.
inline ExperimentResult run_experiment(const SetSystem& sys, const UpdateSequence& seq, AlgorithmKind kind,
                                       double beta, const ExperimentOptions& options = {}) {
  if (seq.steps.empty()) throw std::invalid_argument("sequence has zero steps");
  if (auto err = validate_sequence(seq, sys)) throw std::invalid_argument("invalid sequence: " + *err);
  if (!beta_allowed(kind, beta)) {
    if (kind == AlgorithmKind::kRobust) {
      throw std::invalid_argument("beta must lie in (1,2) for robust algorithm");
    }
    throw std::invalid_argument("beta must be greater than 1");
  }

  AnyAlgorithm algo(kind, sys, beta, seq.header.capacity);
  ExperimentResult result;
  if (options.keep_steps) result.steps.reserve(seq.steps.size());
  double total_size = 0.0, total_recourse = 0.0;
  std::int64_t total_ns = 0;
  for (std::size_t i = 0; i < seq.steps.size(); ++i) {
    StepReport report;
    try {
      const auto start = std::chrono::steady_clock::now();
      report = algo.update(seq.steps[i]);
      const auto stop = std::chrono::steady_clock::now();
      report.elapsed_ns = std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
    } catch (const std::exception& ex) {
      throw ExperimentError(i + 1, ex.what());
    }
    if (options.checking) {
      if (auto err = algo.check()) throw ExperimentError(i + 1, "invariant violated: " + *err);
    }
    total_size += static_cast<double>(report.cover_size);
    total_recourse += static_cast<double>(report.recourse);
    total_ns += report.elapsed_ns;
    if (options.keep_steps) result.steps.push_back(report);
  }
  const auto k = static_cast<double>(seq.steps.size());
  auto& r = result.record;
  r.instance = options.instance;
  r.algo = std::string(algorithm_name(kind));
  r.beta = beta;
  r.rep = options.rep;
  r.steps = seq.steps.size();
  r.amortized_size = total_size / k;
  r.amortized_time_ns = static_cast<double>(total_ns) / k;
  r.amortized_recourse = total_recourse / k;
  return result;
}

/// g(s, t, r) = s * sqrt(t) * sqrt(r). Zero recourse gives zero.
inline double objective_g(double size, double time, double recourse) {
  if (!(size > 0.0)) throw std::invalid_argument("objective_g: size must be positive");
  if (!(time > 0.0)) throw std::invalid_argument("objective_g: time must be positive");
  if (recourse < 0.0) throw std::invalid_argument("objective_g: recourse must be non-negative");
  return size * std::sqrt(time) * std::sqrt(recourse);
}

/// Averages repetitions: one record per (instance, algo, beta), rep = 0.
inline std::vector<MetricsRecord> average_reps(const std::vector<MetricsRecord>& records) {
  std::map<std::tuple<std::string, std::string, double>, std::pair<MetricsRecord, std::size_t>> groups;
  for (const auto& r : records) {
    auto [it, fresh] = groups.try_emplace({r.instance, r.algo, r.beta}, r, 1);
    if (fresh) continue;
    auto& [acc, n] = it->second;
    acc.amortized_size += r.amortized_size;
    acc.amortized_time_ns += r.amortized_time_ns;
    acc.amortized_recourse += r.amortized_recourse;
    ++n;
  }
  std::vector<MetricsRecord> out;
  for (auto& [key, entry] : groups) {
    auto [acc, n] = entry;
    acc.rep = 0;
    acc.amortized_size /= static_cast<double>(n);
    acc.amortized_time_ns /= static_cast<double>(n);
    acc.amortized_recourse /= static_cast<double>(n);
    out.push_back(acc);
  }
  return out;
}

/// Per algorithm: the per-instance beta minimizing g (ties to the smaller
/// beta), then the lower median of those winners.
inline std::map<std::string, double> select_best_beta(const std::vector<MetricsRecord>& records) {
  const auto averaged = average_reps(records);
  std::map<std::string, std::set<double>> betas;
  std::map<std::string, std::set<std::string>> instances;
  std::map<std::tuple<std::string, std::string, double>, const MetricsRecord*> cell;
  for (const auto& r : averaged) {
    betas[r.algo].insert(r.beta);
    instances[r.algo].insert(r.instance);
    cell[{r.algo, r.instance, r.beta}] = &r;
  }
  std::set<std::string> all_instances;
  for (const auto& r : averaged) all_instances.insert(r.instance);

  std::map<std::string, double> best;
  for (const auto& [algo, grid] : betas) {
    std::vector<double> winners;
    for (const auto& inst : all_instances) {
      double arg = 0.0, low = 0.0;
      bool first = true;
      for (double b : grid) {
        auto it = cell.find({algo, inst, b});
        if (it == cell.end()) {
          std::ostringstream msg;
          msg << "missing record for algo " << algo << ", instance " << inst << ", beta " << b;
          throw std::invalid_argument(msg.str());
        }
        const auto& r = *it->second;
        const double g = objective_g(r.amortized_size, r.amortized_time_ns, r.amortized_recourse);
        if (first || g < low) {
          low = g;
          arg = b;
          first = false;
        }
      }
      winners.push_back(arg);
    }
    std::sort(winners.begin(), winners.end());
    best[algo] = winners[(winners.size() - 1) / 2];
  }
  return best;
}

struct ProfilePoint {
  double tau;
  double fraction;
};

struct ProfileSeries {
  std::string label;
  std::vector<ProfilePoint> points;
};

/// Dolan–Moré performance profile for one metric.
struct ProfileCurve {
  Metric metric = Metric::kSize;
  std::vector<ProfileSeries> series;

  const ProfileSeries* find(std::string_view label) const {
    for (const auto& s : series) {
      if (s.label == label) return &s;
    }
    return nullptr;
  }

  /// Fraction of instances on which `label` is within factor tau of the best.
  double fraction_at(std::string_view label, double tau) const {
    const auto* s = find(label);
    if (s == nullptr) return 0.0;
    double f = 0.0;
    for (const auto& p : s->points) {
      if (p.tau <= tau) f = p.fraction;
    }
    return f;
  }
};

/// Series label for a record: the algorithm name, or "algo@beta" when the
/// records hold more than one beta for that algorithm.
inline std::vector<std::string> profile_labels(const std::vector<MetricsRecord>& records) {
  std::map<std::string, std::set<double>> betas;
  for (const auto& r : records) betas[r.algo].insert(r.beta);
  std::vector<std::string> labels;
  labels.reserve(records.size());
  for (const auto& r : records) {
    if (betas[r.algo].size() <= 1) {
      labels.push_back(r.algo);
    } else {
      std::ostringstream os;
      os << r.algo << '@' << r.beta;
      labels.push_back(os.str());
    }
  }
  return labels;
}

/// Per instance the best value over all series; a series' ratio there is
/// value / best. fraction(tau) is the share of all instances with ratio <=
/// tau, sampled at every distinct ratio. A series missing an instance never
/// counts as within tau on it.
inline ProfileCurve performance_profile(const std::vector<MetricsRecord>& records, Metric metric) {
  const auto averaged = average_reps(records);
  const auto labels = profile_labels(averaged);
  std::map<std::string, std::map<std::string, double>> values;  // label -> instance -> value
  std::set<std::string> instances;
  for (std::size_t i = 0; i < averaged.size(); ++i) {
    const double v = averaged[i].value(metric);
    if (!(v > 0.0)) {
      throw std::invalid_argument("performance profile needs positive values; " + averaged[i].algo + " on " +
                                  averaged[i].instance + " has " + std::to_string(v));
    }
    values[labels[i]][averaged[i].instance] = v;
    instances.insert(averaged[i].instance);
  }
  std::map<std::string, double> best;
  for (const auto& [label, per_instance] : values) {
    for (const auto& [inst, v] : per_instance) {
      auto [it, fresh] = best.try_emplace(inst, v);
      if (!fresh) it->second = std::min(it->second, v);
    }
  }
  std::map<std::string, std::vector<double>> ratios;
  std::set<double> taus;
  for (const auto& [label, per_instance] : values) {
    for (const auto& [inst, v] : per_instance) {
      const double ratio = v / best[inst];
      ratios[label].push_back(ratio);
      taus.insert(ratio);
    }
  }
  ProfileCurve curve;
  curve.metric = metric;
  const auto total = static_cast<double>(instances.size());
  for (auto& [label, rs] : ratios) {
    std::sort(rs.begin(), rs.end());
    ProfileSeries series{label, {}};
    std::size_t within = 0;
    for (double tau : taus) {
      while (within < rs.size() && rs[within] <= tau) ++within;
      series.points.push_back({tau, static_cast<double>(within) / total});
    }
    curve.series.push_back(std::move(series));
  }
  return curve;
}

struct TradeoffRow {
  std::string algo;
  double beta = 0.0;
  double gm_norm_size = 0.0;
  double gm_norm_time = 0.0;
  double gm_norm_recourse = 0.0;
};

/// Per instance and metric, every (algo, beta) value is divided by the best
/// over all combinations; rows hold the geometric mean of those ratios over
/// instances. An instance whose best value is zero carries no information
/// for that metric and is left out of its mean.
inline std::vector<TradeoffRow> tradeoff_curves(const std::vector<MetricsRecord>& records) {
  const auto averaged = average_reps(records);
  const Metric metrics[3] = {Metric::kSize, Metric::kTime, Metric::kRecourse};
  std::map<std::string, std::array<double, 3>> best;
  for (const auto& r : averaged) {
    auto [it, fresh] = best.try_emplace(r.instance, std::array<double, 3>{});
    for (int m = 0; m < 3; ++m) {
      const double v = r.value(metrics[m]);
      it->second[m] = fresh ? v : std::min(it->second[m], v);
    }
  }
  std::map<std::pair<std::string, double>, std::array<std::pair<double, std::size_t>, 3>> acc;
  for (const auto& r : averaged) {
    auto& slot = acc[{r.algo, r.beta}];
    for (int m = 0; m < 3; ++m) {
      const double b = best[r.instance][m];
      if (!(b > 0.0)) continue;
      slot[m].first += std::log(r.value(metrics[m]) / b);
      ++slot[m].second;
    }
  }
  std::vector<TradeoffRow> rows;
  for (const auto& [key, slot] : acc) {
    TradeoffRow row{key.first, key.second, 0, 0, 0};
    double* out[3] = {&row.gm_norm_size, &row.gm_norm_time, &row.gm_norm_recourse};
    for (int m = 0; m < 3; ++m) {
      *out[m] = slot[m].second == 0 ? std::nan("") : std::exp(slot[m].first / static_cast<double>(slot[m].second));
    }
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return std::to_string(v);
  return std::string(buf, ptr);
}

inline constexpr std::string_view kResultsHeader =
    "instance,algo,beta,rep,steps,amortized_size,amortized_time_ns,amortized_recourse";
inline constexpr std::string_view kProfileHeader = "metric,algo,tau,fraction";
inline constexpr std::string_view kTradeoffHeader = "algo,beta,gm_norm_size,gm_norm_time,gm_norm_recourse";

inline void write_results_csv(std::ostream& out, const std::vector<MetricsRecord>& records, bool header = true) {
  if (header) out << kResultsHeader << '\n';
  for (const auto& r : records) {
    out << r.instance << ',' << r.algo << ',' << format_double(r.beta) << ',' << r.rep << ',' << r.steps << ','
        << format_double(r.amortized_size) << ',' << format_double(r.amortized_time_ns) << ','
        << format_double(r.amortized_recourse) << '\n';
  }
}

inline void write_profile_csv(std::ostream& out, const ProfileCurve& curve) {
  out << kProfileHeader << '\n';
  for (const auto& s : curve.series) {
    for (const auto& p : s.points) {
      out << metric_name(curve.metric) << ',' << s.label << ',' << format_double(p.tau) << ','
          << format_double(p.fraction) << '\n';
    }
  }
}

inline void write_tradeoff_csv(std::ostream& out, const std::vector<TradeoffRow>& rows) {
  out << kTradeoffHeader << '\n';
  for (const auto& r : rows) {
    out << r.algo << ',' << format_double(r.beta) << ',' << format_double(r.gm_norm_size) << ','
        << format_double(r.gm_norm_time) << ',' << format_double(r.gm_norm_recourse) << '\n';
  }
}

namespace detail {

inline std::vector<std::string> split_csv(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

inline double parse_double(const std::string& field, std::size_t lineno) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw std::invalid_argument("line " + std::to_string(lineno) + ": malformed number '" + field + "'");
  }
  return v;
}

}  // namespace detail

/// Reads a results CSV; lines starting with '#' are metadata and skipped.
inline std::vector<MetricsRecord> read_results_csv(std::string_view text) {
  std::vector<MetricsRecord> records;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool seen_header = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kResultsHeader) {
        throw std::invalid_argument("results CSV header must be \"" + std::string(kResultsHeader) + "\"");
      }
      seen_header = true;
      continue;
    }
    const auto f = detail::split_csv(line);
    if (f.size() != 8) throw std::invalid_argument("line " + std::to_string(lineno) + ": expected 8 fields");
    MetricsRecord r;
    r.instance = f[0];
    r.algo = f[1];
    r.beta = detail::parse_double(f[2], lineno);
    r.rep = static_cast<std::size_t>(detail::parse_double(f[3], lineno));
    r.steps = static_cast<std::size_t>(detail::parse_double(f[4], lineno));
    r.amortized_size = detail::parse_double(f[5], lineno);
    r.amortized_time_ns = detail::parse_double(f[6], lineno);
    r.amortized_recourse = detail::parse_double(f[7], lineno);
    records.push_back(std::move(r));
  }
  if (!seen_header) throw std::invalid_argument("results CSV is empty");
  return records;
}

// ---------------------------------------------------------------------------
// Sweeps

struct SweepJob {
  std::string instance;
  const SetSystem* system = nullptr;
  const UpdateSequence* sequence = nullptr;
  AlgorithmKind algo = AlgorithmKind::kLocal;
  double beta = 1.5;
  std::size_t rep = 0;
};

/// Runs independent jobs on up to `parallel` threads. Results come back in
/// job order regardless of scheduling.
inline std::vector<MetricsRecord> run_sweep(const std::vector<SweepJob>& jobs, std::size_t parallel,
                                            bool checking = false) {
  std::vector<MetricsRecord> results(jobs.size());
  std::vector<std::exception_ptr> errors(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const auto& job = jobs[i];
      try {
        ExperimentOptions opts;
        opts.checking = checking;
        opts.instance = job.instance;
        opts.rep = job.rep;
        results[i] = run_experiment(*job.system, *job.sequence, job.algo, job.beta, opts).record;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::max<std::size_t>(1, std::min(parallel, jobs.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

}  // namespace dynsc
