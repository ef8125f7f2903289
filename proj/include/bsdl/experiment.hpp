#pragma once

#include <array>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "bsdl/framework.hpp"
#include "bsdl/io.hpp"
#include "bsdl/synth.hpp"

namespace bsdl {

enum class ExperimentId {
  SacOnly,             // structure recovery with the true dictionary
  BksvdVsBaseline,     // block update vs. atom-wise update, true structure
  FullFramework,       // everything learned from the signals alone
  MixedBlocks,         // true blocks of sizes 2 and 3
  WrongBlocksize,      // true blocks of size 2, size cap mistakenly 3
};

enum class SweepAxis { SnrDb, BlockSparsity, Iterations };

struct ExperimentSpec {
  ExperimentId id = ExperimentId::FullFramework;
  SweepAxis axis = SweepAxis::SnrDb;
  std::vector<double> sweep = {std::numeric_limits<double>::infinity()};
  int trials = 10;
  int signal_dim = 30;
  int num_atoms = 60;
  std::vector<int> block_sizes = std::vector<int>(20, 3);
  int block_sparsity = 2;
  int min_block_size = 0;   // 0: use max_block_size
  int max_block_size = 0;   // 0: use max of block_sizes
  int num_signals = 600;
  int outer_iters = 250;
  int ksvd_init_iters = 30;
  int ksvd_nonzeros = 0;    // 0: 8 for FullFramework, k*s_h otherwise
  std::uint64_t seed = 1;
  int threads = 1;
  std::vector<std::string> algorithms;  // empty: all algorithms of the id
};

struct ResultRow {
  std::string experiment;
  double sweep_value = 0.0;
  int trial = 0;  // -1 marks an aggregate mean row
  double e = std::numeric_limits<double>::quiet_NaN();
  double p = std::numeric_limits<double>::quiet_NaN();
  double b = std::numeric_limits<double>::quiet_NaN();
  std::string algorithm;
  bool failed = false;
};

inline std::string experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::SacOnly: return "sac_only";
    case ExperimentId::BksvdVsBaseline: return "bksvd_vs_bksvd_baseline";
    case ExperimentId::FullFramework: return "full_framework";
    case ExperimentId::MixedBlocks: return "mixed_blocks";
    case ExperimentId::WrongBlocksize: return "wrong_blocksize";
  }
  return "unknown";
}

inline ExperimentId parse_experiment_id(const std::string& name) {
  for (ExperimentId id : {ExperimentId::SacOnly, ExperimentId::BksvdVsBaseline,
                          ExperimentId::FullFramework, ExperimentId::MixedBlocks,
                          ExperimentId::WrongBlocksize}) {
    if (experiment_name(id) == name) return id;
  }
  throw InfeasibleConfig("unknown experiment id '" + name + "'");
}

inline std::vector<std::string> default_algorithms(ExperimentId id) {
  switch (id) {
    case ExperimentId::SacOnly: return {"sac", "oracle"};
    case ExperimentId::BksvdVsBaseline: return {"bksvd", "bksvd_atomwise"};
    case ExperimentId::FullFramework:
      return {"bksvd_sac", "ksvd", "bksvd_random_d", "oracle"};
    case ExperimentId::MixedBlocks:
    case ExperimentId::WrongBlocksize: return {"bksvd_sac", "ksvd"};
  }
  return {};
}

/// Spec with the per-experiment defaults filled in (block layout, size
/// bounds, baseline budgets).
inline ExperimentSpec make_experiment_spec(ExperimentId id) {
  ExperimentSpec spec;
  spec.id = id;
  switch (id) {
    case ExperimentId::MixedBlocks: {
      spec.block_sizes.assign(12, 2);
      spec.block_sizes.insert(spec.block_sizes.end(), 12, 3);
      spec.min_block_size = 2;
      spec.max_block_size = 3;
      break;
    }
    case ExperimentId::WrongBlocksize: {
      spec.block_sizes.assign(30, 2);
      spec.min_block_size = 2;
      spec.max_block_size = 3;
      break;
    }
    default: break;
  }
  return spec;
}

namespace detail {

struct TrialSettings {
  int block_sparsity = 2;
  double snr_db = std::numeric_limits<double>::infinity();
  int iters = 250;
  int s_low = 3;
  int s_high = 3;
  int ksvd_nonzeros = 8;
};

inline TrialSettings trial_settings(const ExperimentSpec& spec, double sweep_value) {
  TrialSettings s;
  s.block_sparsity = spec.block_sparsity;
  s.iters = spec.outer_iters;
  switch (spec.axis) {
    case SweepAxis::SnrDb: s.snr_db = sweep_value; break;
    case SweepAxis::BlockSparsity:
      s.block_sparsity = static_cast<int>(sweep_value);
      break;
    case SweepAxis::Iterations: s.iters = static_cast<int>(sweep_value); break;
  }
  int max_true = 1;
  for (int sz : spec.block_sizes) max_true = std::max(max_true, sz);
  s.s_high = spec.max_block_size > 0 ? spec.max_block_size : max_true;
  s.s_low = spec.min_block_size > 0 ? spec.min_block_size : s.s_high;
  s.ksvd_nonzeros = spec.ksvd_nonzeros > 0 ? spec.ksvd_nonzeros
                    : spec.id == ExperimentId::FullFramework
                        ? 8
                        : s.block_sparsity * s.s_high;
  return s;
}

// Perturbed start for the fixed-structure ablation: every block of the true
// layout is rebuilt as a random linear combination of two randomly selected
// true blocks.
inline Matrix perturbed_block_dictionary(const Matrix& true_dict,
                                         const BlockStructure& true_d,
                                         std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x9E27ULL));
  const auto blocks = true_d.block_lists();
  const int num_blocks = static_cast<int>(blocks.size());
  Matrix dict(true_dict.rows(), true_dict.cols());
  for (const auto& [label, atoms] : blocks) {
    const auto chosen = rng.sample_without_replacement(num_blocks, 2);
    std::vector<int> source_atoms;
    for (int b : chosen)
      for (int atom : blocks[static_cast<std::size_t>(b)].second)
        source_atoms.push_back(atom);
    Matrix source(true_dict.rows(), static_cast<Eigen::Index>(source_atoms.size()));
    for (std::size_t i = 0; i < source_atoms.size(); ++i)
      source.col(static_cast<Eigen::Index>(i)) = true_dict.col(source_atoms[i]);
    Matrix mix(source.cols(), static_cast<Eigen::Index>(atoms.size()));
    for (Eigen::Index c = 0; c < mix.cols(); ++c)
      for (Eigen::Index r = 0; r < mix.rows(); ++r) mix(r, c) = rng.normal();
    const Matrix block = normalize_columns(source * mix);
    for (std::size_t i = 0; i < atoms.size(); ++i)
      dict.col(atoms[i]) = block.col(static_cast<Eigen::Index>(i));
  }
  return dict;
}

// Atoms shuffled uniformly, then grouped into the given size layout.
inline BlockStructure random_block_structure(int num_atoms,
                                             const std::vector<int>& sizes,
                                             int max_block_size,
                                             std::uint64_t seed) {
  Rng rng(mix_seed(seed, 0x5FF1EULL));
  std::vector<int> atoms(static_cast<std::size_t>(num_atoms));
  for (int i = 0; i < num_atoms; ++i) atoms[static_cast<std::size_t>(i)] = i;
  rng.shuffle(atoms);
  std::vector<int> labels(static_cast<std::size_t>(num_atoms), 0);
  int pos = 0, label = 0;
  for (int sz : sizes) {
    for (int i = 0; i < sz; ++i)
      labels[static_cast<std::size_t>(atoms[static_cast<std::size_t>(pos++)])] = label;
    ++label;
  }
  return BlockStructure(std::move(labels), max_block_size);
}

}  // namespace detail

/// Runs one experiment trial for one algorithm; used by run_experiment and
/// by per-iteration trace captures. Returns (e, p, b).
inline std::array<double, 3> run_trial_algorithm(
    const ExperimentSpec& spec, const detail::TrialSettings& ts,
    const std::string& algorithm, const GroundTruth& gt, const Matrix& x,
    std::uint64_t learner_seed, std::uint64_t aux_seed,
    const LearnObserver& observer = {}) {
  const int num_signals = static_cast<int>(x.cols());
  const CodingBudget bomp_budget{ts.block_sparsity, 1e-12};

  if (algorithm == "oracle") {
    auto [theta, e] = oracle_run(gt.dictionary, gt.structure, x,
                                 ts.block_sparsity, 1e-12, spec.threads);
    const double b = static_cast<double>(block_sparsity_objective(theta, gt.structure)) /
                     num_signals;
    return {e, 100.0, b};
  }
  if (algorithm == "sac") {
    const CodingBudget omp_budget{ts.block_sparsity * ts.s_low, 1e-12};
    const Matrix scout = code_matrix(gt.dictionary, nullptr, x, omp_budget, spec.threads);
    const BlockStructure d = sac_cluster(scout, ts.s_high).structure;
    const Matrix theta = code_matrix(gt.dictionary, &d, x, bomp_budget, spec.threads);
    const double e = representation_error(x, gt.dictionary, theta);
    const double p = recovery_percentage(gt.dictionary, d, gt.dictionary, gt.structure);
    const double b = static_cast<double>(block_sparsity_objective(theta, d)) / num_signals;
    return {e, p, b};
  }
  if (algorithm == "bksvd" || algorithm == "bksvd_atomwise") {
    const Matrix dict0 = detail::perturbed_block_dictionary(gt.dictionary, gt.structure, aux_seed);
    const auto mode = algorithm == "bksvd" ? DictUpdateMode::BlockSvd
                                           : DictUpdateMode::AtomSvd;
    const auto res = bksvd_learn(x, dict0, gt.structure, bomp_budget, ts.iters,
                                 mode, kLearnRelTol, spec.threads);
    const double e = res.trace.back().error;
    const double p = recovery_percentage(res.dictionary, gt.structure,
                                         gt.dictionary, gt.structure);
    const double b = static_cast<double>(block_sparsity_objective(
                         res.coefficients, gt.structure)) /
                     num_signals;
    return {e, p, b};
  }
  if (algorithm == "bksvd_sac") {
    LearnConfig cfg;
    cfg.num_atoms = spec.num_atoms;
    cfg.block_sparsity = ts.block_sparsity;
    cfg.max_block_size = ts.s_high;
    cfg.min_block_size = ts.s_low;
    cfg.outer_iters = ts.iters;
    cfg.ksvd_init_iters = spec.ksvd_init_iters;
    cfg.seed = learner_seed;
    cfg.threads = spec.threads;
    const auto res = learn_block_dictionary(x, cfg, observer);
    const double e = res.trace.back().error;
    const double p = recovery_percentage(res.dictionary, res.structure,
                                         gt.dictionary, gt.structure);
    const double b = static_cast<double>(block_sparsity_objective(
                         res.coefficients, res.structure)) /
                     num_signals;
    return {e, p, b};
  }
  if (algorithm == "ksvd") {
    const Matrix dict0 = initial_dictionary_from_signals(x, spec.num_atoms, learner_seed);
    const CodingBudget budget{ts.ksvd_nonzeros, 1e-12};
    const auto res = ksvd_learn(x, dict0, budget, ts.iters, kLearnRelTol, spec.threads);
    const double e = res.trace.back().error;
    // K-SVD yields no block structure; cluster its usage patterns to give
    // it the best shot at the block metrics.
    const BlockStructure d = sac_cluster(res.coefficients, ts.s_high).structure;
    const double p = recovery_percentage(res.dictionary, d, gt.dictionary, gt.structure);
    const double b = static_cast<double>(block_sparsity_objective(res.coefficients, d)) /
                     num_signals;
    return {e, p, b};
  }
  if (algorithm == "bksvd_random_d") {
    const BlockStructure d_rand = detail::random_block_structure(
        spec.num_atoms, spec.block_sizes, ts.s_high, aux_seed);
    Matrix dict0 = initial_dictionary_from_signals(x, spec.num_atoms, learner_seed);
    const CodingBudget init_budget{ts.block_sparsity * ts.s_low, 1e-12};
    dict0 = ksvd_learn(x, dict0, init_budget, spec.ksvd_init_iters,
                       kLearnRelTol, spec.threads)
                .dictionary;
    const auto res = bksvd_learn(x, dict0, d_rand, bomp_budget, ts.iters,
                                 DictUpdateMode::BlockSvd, kLearnRelTol,
                                 spec.threads);
    const double e = res.trace.back().error;
    const double p = recovery_percentage(res.dictionary, d_rand, gt.dictionary,
                                         gt.structure);
    const double b = static_cast<double>(block_sparsity_objective(
                         res.coefficients, d_rand)) /
                     num_signals;
    return {e, p, b};
  }
  throw InfeasibleConfig("unknown algorithm '" + algorithm + "'");
}

inline GroundTruth make_ground_truth(const ExperimentSpec& spec,
                                     int block_sparsity, std::uint64_t seed) {
  GroundTruth gt;
  gt.dictionary = generate_dictionary(spec.signal_dim, spec.num_atoms, seed);
  gt.structure = generate_block_structure(spec.num_atoms, spec.block_sizes);
  auto [x, theta] = generate_signals(gt.dictionary, gt.structure,
                                     block_sparsity, spec.num_signals, seed);
  gt.signals = std::move(x);
  gt.coefficients = std::move(theta);
  return gt;
}

/// Runs every (sweep point, trial, algorithm) combination in deterministic
/// order and appends per-(sweep, algorithm) mean rows. A failing trial is
/// recorded with NaN metrics and the run continues.
inline std::vector<ResultRow> run_experiment(const ExperimentSpec& spec,
                                             std::ostream* progress = nullptr) {
  if (spec.sweep.empty()) throw InfeasibleConfig("experiment sweep is empty");
  if (spec.trials < 1) throw InfeasibleConfig("trial count must be >= 1");
  const std::string name = experiment_name(spec.id);
  const std::vector<std::string> algorithms =
      spec.algorithms.empty() ? default_algorithms(spec.id) : spec.algorithms;

  std::vector<ResultRow> rows;
  for (std::size_t sweep_idx = 0; sweep_idx < spec.sweep.size(); ++sweep_idx) {
    const double sweep_value = spec.sweep[sweep_idx];
    const auto ts = detail::trial_settings(spec, sweep_value);
    for (int trial = 0; trial < spec.trials; ++trial) {
      const std::uint64_t gt_seed = mix_seed(spec.seed, 4 * sweep_idx + 0, trial);
      const std::uint64_t noise_seed = mix_seed(spec.seed, 4 * sweep_idx + 1, trial);
      const std::uint64_t learner_seed = mix_seed(spec.seed, 4 * sweep_idx + 2, trial);
      const std::uint64_t aux_seed = mix_seed(spec.seed, 4 * sweep_idx + 3, trial);
      GroundTruth gt;
      Matrix x;
      bool trial_ok = true;
      try {
        gt = make_ground_truth(spec, ts.block_sparsity, gt_seed);
        x = add_noise(gt.signals, ts.snr_db, noise_seed);
      } catch (const Error& e) {
        trial_ok = false;
        if (progress)
          *progress << name << " trial " << trial << ": generation failed: "
                    << e.what() << '\n';
      }
      for (const auto& algorithm : algorithms) {
        ResultRow row;
        row.experiment = name;
        row.sweep_value = sweep_value;
        row.trial = trial;
        row.algorithm = algorithm;
        if (trial_ok) {
          try {
            const auto [e, p, b] = run_trial_algorithm(spec, ts, algorithm, gt, x,
                                                       learner_seed, aux_seed);
            row.e = e;
            row.p = p;
            row.b = b;
          } catch (const Error& err) {
            row.failed = true;
            if (progress)
              *progress << name << " trial " << trial << " " << algorithm
                        << " failed: " << err.what() << '\n';
          }
        } else {
          row.failed = true;
        }
        if (progress && !row.failed)
          *progress << name << " sweep=" << detail::format_double(sweep_value)
                    << " trial=" << trial << " " << algorithm << ": e=" << row.e
                    << " p=" << row.p << " b=" << row.b << '\n';
        rows.push_back(std::move(row));
      }
    }
  }

  // Aggregate means over the successful trials of each (sweep, algorithm).
  // Data rows are laid out sweep-major, then trial, then algorithm.
  const std::size_t num_algs = algorithms.size();
  std::vector<ResultRow> means;
  for (std::size_t sweep_idx = 0; sweep_idx < spec.sweep.size(); ++sweep_idx) {
    for (std::size_t alg_idx = 0; alg_idx < num_algs; ++alg_idx) {
      ResultRow mean;
      mean.experiment = name;
      mean.sweep_value = spec.sweep[sweep_idx];
      mean.trial = -1;
      mean.algorithm = algorithms[alg_idx];
      double se = 0, sp = 0, sb = 0;
      int count = 0;
      for (int trial = 0; trial < spec.trials; ++trial) {
        const std::size_t pos =
            (sweep_idx * static_cast<std::size_t>(spec.trials) +
             static_cast<std::size_t>(trial)) *
                num_algs +
            alg_idx;
        if (rows[pos].failed) continue;
        se += rows[pos].e;
        sp += rows[pos].p;
        sb += rows[pos].b;
        ++count;
      }
      if (count > 0) {
        mean.e = se / count;
        mean.p = sp / count;
        mean.b = sb / count;
      } else {
        mean.failed = true;
      }
      means.push_back(std::move(mean));
    }
  }
  rows.insert(rows.end(), means.begin(), means.end());
  return rows;
}

inline std::string results_csv(const std::vector<ResultRow>& rows) {
  std::ostringstream os;
  os << "experiment,sweep_value,trial,e,p,b,algorithm\n";
  for (const auto& row : rows) {
    os << row.experiment << ',' << detail::format_double(row.sweep_value) << ',';
    if (row.trial < 0)
      os << "mean";
    else
      os << row.trial;
    os << ',' << detail::format_double(row.e) << ',' << detail::format_double(row.p)
       << ',' << detail::format_double(row.b) << ',' << row.algorithm << '\n';
  }
  return os.str();
}

inline void write_results_csv(const std::string& path,
                              const std::vector<ResultRow>& rows) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path + "' for writing");
  os << results_csv(rows);
  if (!os) throw IoError("failed writing '" + path + "'");
}

}  // namespace bsdl
