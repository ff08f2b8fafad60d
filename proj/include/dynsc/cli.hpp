#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "dynsc/bench.hpp"
#include "dynsc/dynamizer.hpp"
#include "dynsc/oracle.hpp"
#include "dynsc/setsystem.hpp"

namespace dynsc::cli {

namespace detail {

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

inline std::vector<ElementId> parse_universe(const std::string& text, const SetSystem& sys) {
  std::vector<ElementId> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) {
    std::uint64_t id = 0;
    if (!dynsc::detail::parse_uint(token, id) || id == 0 || id > sys.num_elements()) {
      throw std::invalid_argument("universe: bad element id '" + token + "'");
    }
    out.push_back(static_cast<ElementId>(id - 1));
  }
  return out;
}

inline void require_beta(AlgorithmKind kind, double beta) {
  if (kind == AlgorithmKind::kRobust && !(beta > 1.0 && beta < 2.0)) {
    std::ostringstream msg;
    msg << "beta must lie in (1,2) for robust algorithm, got " << beta;
    throw std::invalid_argument(msg.str());
  }
  if (!(beta > 1.0)) {
    std::ostringstream msg;
    msg << "beta must be greater than 1, got " << beta;
    throw std::invalid_argument(msg.str());
  }
}

/// Instance files in a directory, sorted by name. Files ending in .seq are
/// sequences that belong to the instance of the same stem.
inline std::vector<std::filesystem::path> instance_files(const std::string& dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(dir)) throw std::runtime_error("not a directory: '" + dir + "'");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file()) continue;
    const auto ext = entry.path().extension().string();
    if (ext == ".seq" || ext == ".csv") continue;
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) throw std::runtime_error("no instance files in '" + dir + "'");
  return files;
}

}  // namespace detail

/// Parses argv and runs one subcommand. Returns the process exit code.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dynamic set cover engine and benchmark harness", "dynsc"};
  app.require_subcommand(1);

  // dynamize
  std::string dyn_instance, dyn_out;
  std::uint64_t dyn_seed = 1;
  auto* dyn = app.add_subcommand("dynamize", "Generate an insert/delete sequence for an instance");
  dyn->add_option("instance", dyn_instance, "Instance file")->required();
  dyn->add_option("--seed", dyn_seed, "Generator seed");
  dyn->add_option("--out", dyn_out, "Output sequence file")->required();

  // run / verify share flags
  std::string algo_name, inst_path, seq_path, run_out;
  double beta = 0.0;
  bool check = false;
  auto* run = app.add_subcommand("run", "Replay a sequence and report amortized metrics");
  run->add_option("--algo", algo_name, "robust|local|partial|global|naive")->required();
  run->add_option("--beta", beta, "Level base")->required();
  run->add_option("--instance", inst_path, "Instance file")->required();
  run->add_option("--sequence", seq_path, "Sequence file")->required();
  run->add_flag("--check", check, "Check invariants after every step (untimed)");
  run->add_option("--out", run_out, "Results CSV (stdout when omitted)");

  auto* verify = app.add_subcommand("verify", "Replay with invariant checks after every step");
  verify->add_option("--algo", algo_name, "robust|local|partial|global|naive")->required();
  verify->add_option("--beta", beta, "Level base")->required();
  verify->add_option("--instance", inst_path, "Instance file")->required();
  verify->add_option("--sequence", seq_path, "Sequence file")->required();

  // sweep
  std::vector<std::string> sweep_algos;
  std::vector<double> sweep_betas;
  std::string sweep_dir, sweep_out;
  std::size_t sweep_reps = 1, sweep_parallel = 1;
  std::uint64_t sweep_seed = 1;
  auto* sweep = app.add_subcommand("sweep", "Run every algorithm/beta/rep over a directory of instances");
  sweep->add_option("--algos", sweep_algos, "Comma-separated algorithms")->required()->delimiter(',');
  sweep->add_option("--betas", sweep_betas, "Comma-separated betas")->required()->delimiter(',');
  sweep->add_option("--instances", sweep_dir, "Instance directory")->required();
  sweep->add_option("--reps", sweep_reps, "Repetitions per combination")->check(CLI::PositiveNumber);
  sweep->add_option("--parallel", sweep_parallel, "Maximum concurrent runs")->check(CLI::PositiveNumber);
  sweep->add_option("--seed", sweep_seed, "Dynamizer seed for instances without a .seq file");
  sweep->add_option("--out", sweep_out, "Results CSV")->required();

  // profile
  std::string metric_str, in_csv, out_csv;
  auto* profile = app.add_subcommand("profile", "Performance profile of a results CSV");
  profile->add_option("--metric", metric_str, "size|time|recourse")->required();
  profile->add_option("--in", in_csv, "Results CSV")->required();
  profile->add_option("--out", out_csv, "Profile CSV")->required();

  auto* best = app.add_subcommand("best-beta", "Median per-instance beta minimizing s*sqrt(t)*sqrt(r)");
  best->add_option("--in", in_csv, "Results CSV")->required();

  auto* trade = app.add_subcommand("tradeoff", "Normalized quality/efficiency trade-off table");
  trade->add_option("--in", in_csv, "Results CSV")->required();
  trade->add_option("--out", out_csv, "Trade-off CSV")->required();

  // oracle
  std::string universe_path;
  auto* oracle = app.add_subcommand("oracle", "Exact minimum cover size of a small universe");
  oracle->add_option("--instance", inst_path, "Instance file")->required();
  oracle->add_option("--universe", universe_path, "File of 1-based element ids (default: all)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (*dyn) {
      const auto sys = load_instance_file(dyn_instance);
      const auto seq = dynamize(sys, dyn_seed);
      detail::write_text_file(dyn_out, to_sequence_text(seq));
      return 0;
    }
    if (*run || *verify) {
      const auto kind = parse_algorithm(algo_name);
      detail::require_beta(kind, beta);
      const auto sys = load_instance_file(inst_path);
      const auto seq = load_sequence_file(seq_path);
      ExperimentOptions opts;
      opts.checking = check || *verify;
      opts.instance = std::filesystem::path(inst_path).filename().string();
      ExperimentResult result;
      try {
        result = run_experiment(sys, seq, kind, beta, opts);
      } catch (const ExperimentError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
      }
      if (*verify) {
        out << "ok: " << result.record.steps << " steps, invariants held\n";
        return 0;
      }
      if (run_out.empty()) {
        write_results_csv(out, {result.record});
      } else {
        std::ostringstream text;
        text << "# seed=" << seq.header.seed << '\n';
        write_results_csv(text, {result.record});
        detail::write_text_file(run_out, text.str());
      }
      return 0;
    }
    if (*sweep) {
      std::vector<AlgorithmKind> kinds;
      for (const auto& a : sweep_algos) kinds.push_back(parse_algorithm(a));
      const auto files = detail::instance_files(sweep_dir);
      std::vector<SetSystem> systems;
      std::vector<UpdateSequence> sequences;
      std::vector<std::string> names;
      systems.reserve(files.size());
      sequences.reserve(files.size());
      for (const auto& f : files) {
        systems.push_back(load_instance_file(f.string()));
        auto seq_file = f;
        seq_file += ".seq";
        sequences.push_back(std::filesystem::exists(seq_file) ? load_sequence_file(seq_file.string())
                                                              : dynamize(systems.back(), sweep_seed));
        names.push_back(f.filename().string());
      }
      std::vector<SweepJob> jobs;
      for (std::size_t i = 0; i < systems.size(); ++i) {
        for (auto kind : kinds) {
          for (double b : sweep_betas) {
            if (!beta_allowed(kind, b)) continue;  // e.g. robust outside (1,2)
            for (std::size_t rep = 0; rep < sweep_reps; ++rep) {
              jobs.push_back({names[i], &systems[i], &sequences[i], kind, b, rep});
            }
          }
        }
      }
      const auto records = run_sweep(jobs, sweep_parallel);
      std::ostringstream text;
      text << "# parallel=" << sweep_parallel << " seed=" << sweep_seed << '\n';
      write_results_csv(text, records);
      detail::write_text_file(sweep_out, text.str());
      return 0;
    }
    if (*profile) {
      const auto metric = parse_metric(metric_str);
      const auto records = read_results_csv(read_file(in_csv));
      std::ostringstream text;
      write_profile_csv(text, performance_profile(records, metric));
      detail::write_text_file(out_csv, text.str());
      return 0;
    }
    if (*best) {
      const auto records = read_results_csv(read_file(in_csv));
      out << "algo,beta\n";
      for (const auto& [algo, b] : select_best_beta(records)) out << algo << ',' << format_double(b) << '\n';
      return 0;
    }
    if (*trade) {
      const auto records = read_results_csv(read_file(in_csv));
      std::ostringstream text;
      write_tradeoff_csv(text, tradeoff_curves(records));
      detail::write_text_file(out_csv, text.str());
      return 0;
    }
    if (*oracle) {
      const auto sys = load_instance_file(inst_path);
      std::vector<ElementId> universe;
      if (universe_path.empty()) {
        for (ElementId e = 0; e < sys.num_elements(); ++e) universe.push_back(e);
      } else {
        universe = detail::parse_universe(read_file(universe_path), sys);
      }
      out << opt_cover(sys, universe) << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

}  // namespace dynsc::cli
