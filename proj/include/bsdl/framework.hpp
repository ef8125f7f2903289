#pragma once

#include <functional>
#include <vector>

#include "bsdl/dict_update.hpp"
#include "bsdl/pursuit.hpp"
#include "bsdl/rng.hpp"
#include "bsdl/sac.hpp"
#include "bsdl/types.hpp"

namespace bsdl {

enum class InitMode {
  KsvdOutcome,    // run K-SVD on a random signal selection first (default)
  RandomSignals,  // start directly from a random signal selection
};

struct LearnConfig {
  int num_atoms = 0;        // K; required
  int block_sparsity = 2;   // k: blocks per signal
  int max_block_size = 3;   // s_h: SAC size cap
  int min_block_size = 0;   // s_l: OMP budget is k * s_l; 0 means s_l = s_h
  int outer_iters = 250;
  int ksvd_init_iters = 30;
  double residual_tol = 1e-12;
  double rel_tol = kLearnRelTol;
  InitMode init = InitMode::KsvdOutcome;
  std::uint64_t seed = 0;
  int threads = 1;

  int effective_min_block_size() const {
    return min_block_size > 0 ? min_block_size : max_block_size;
  }
};

struct OuterTraceRow {
  int iteration = 0;
  double coding_error = 0.0;  // after BOMP recoding
  double error = 0.0;         // after the block update pass
  int num_blocks = 0;
  long long objective = 0;    // total block sparsity of Theta over d
};

struct LearnResult {
  Matrix dictionary;
  BlockStructure structure{std::vector<int>{0}, 1};
  Matrix coefficients;
  Matrix initial_dictionary;  // state entering the first outer iteration
  std::vector<OuterTraceRow> trace;
};

/// Called after each outer iteration with the current state; handy for
/// per-iteration metrics against a known ground truth.
using LearnObserver = std::function<void(
    const OuterTraceRow&, const Matrix& dict, const BlockStructure& d,
    const Matrix& theta)>;

/// K columns of X picked uniformly without replacement (normalized); when X
/// has fewer columns than K the remainder is filled with random unit
/// vectors.
inline Matrix initial_dictionary_from_signals(const Matrix& x, int num_atoms,
                                              std::uint64_t seed) {
  check_signal_matrix(x);
  Rng rng(mix_seed(seed, 0x5161ULL));
  Matrix dict(x.rows(), num_atoms);
  const int num_signals = static_cast<int>(x.cols());
  const int from_data = std::min(num_atoms, num_signals);
  const auto picks = rng.sample_without_replacement(num_signals, from_data);
  for (int j = 0; j < from_data; ++j) {
    Vector col = x.col(picks[static_cast<std::size_t>(j)]);
    double norm = col.norm();
    while (norm < 1e-12) {
      for (Eigen::Index i = 0; i < col.size(); ++i) col[i] = rng.normal();
      norm = col.norm();
    }
    dict.col(j) = col / norm;
  }
  for (int j = from_data; j < num_atoms; ++j) {
    Vector col(x.rows());
    double norm = 0.0;
    do {
      for (Eigen::Index i = 0; i < col.size(); ++i) col[i] = rng.normal();
      norm = col.norm();
    } while (norm < 1e-12);
    dict.col(j) = col / norm;
  }
  return dict;
}

/// Learns a dictionary, its block structure, and block-sparse coefficients
/// from the signals alone. Each outer iteration re-derives the structure
/// from scratch: OMP coding with k*s_l nonzeros, agglomerative clustering of
/// the usage patterns capped at s_h, BOMP recoding with k blocks, then a
/// single block-update pass. Runs until the error change stalls or
/// outer_iters is hit. Returned labels are canonicalized.
inline LearnResult learn_block_dictionary(const Matrix& x, const LearnConfig& cfg,
                                          const LearnObserver& observer = {}) {
  check_signal_matrix(x);
  if (cfg.num_atoms < 1)
    throw InfeasibleConfig("num_atoms must be set");
  if (cfg.block_sparsity < 1 || cfg.max_block_size < 1)
    throw InfeasibleConfig("block sparsity and block size must be >= 1");
  if (cfg.effective_min_block_size() > cfg.max_block_size)
    throw InfeasibleConfig("min block size exceeds max block size");
  if (cfg.block_sparsity * cfg.max_block_size > cfg.num_atoms)
    throw InfeasibleConfig(
        "infeasible config: k * s = " +
        std::to_string(cfg.block_sparsity * cfg.max_block_size) +
        " exceeds the number of atoms " + std::to_string(cfg.num_atoms));
  if (cfg.outer_iters < 1 || cfg.ksvd_init_iters < 1)
    throw InfeasibleConfig("iteration counts must be >= 1");

  const int omp_nonzeros = cfg.block_sparsity * cfg.effective_min_block_size();
  const CodingBudget omp_budget{omp_nonzeros, cfg.residual_tol};
  const CodingBudget bomp_budget{cfg.block_sparsity, cfg.residual_tol};

  LearnResult result;
  Matrix dict = initial_dictionary_from_signals(x, cfg.num_atoms, cfg.seed);
  if (cfg.init == InitMode::KsvdOutcome)
    dict = ksvd_learn(x, dict, omp_budget, cfg.ksvd_init_iters, cfg.rel_tol,
                      cfg.threads)
               .dictionary;
  result.initial_dictionary = dict;

  BlockStructure structure = BlockStructure::singleton(cfg.num_atoms, cfg.max_block_size);
  Matrix theta;
  double previous = -1.0;
  for (int it = 1; it <= cfg.outer_iters; ++it) {
    const Matrix scout = code_matrix(dict, nullptr, x, omp_budget, cfg.threads);
    structure = sac_cluster(scout, cfg.max_block_size).structure;
    theta = code_matrix(dict, &structure, x, bomp_budget, cfg.threads);
    const double coding_error = representation_error(x, dict, theta);
    bksvd_pass(dict, structure, theta, x);
    const double error = representation_error(x, dict, theta);
    OuterTraceRow row{it, coding_error, error, structure.block_count(),
                      block_sparsity_objective(theta, structure)};
    result.trace.push_back(row);
    if (observer) observer(row, dict, structure, theta);
    if (previous >= 0.0 &&
        std::abs(error - previous) / std::max(previous, 1e-15) < cfg.rel_tol)
      break;
    previous = error;
  }

  result.dictionary = std::move(dict);
  result.structure = structure.canonicalized();
  result.coefficients = std::move(theta);
  return result;
}

}  // namespace bsdl
