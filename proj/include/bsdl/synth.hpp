#pragma once

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "bsdl/metrics.hpp"
#include "bsdl/pursuit.hpp"
#include "bsdl/rng.hpp"
#include "bsdl/types.hpp"

namespace bsdl {

struct GroundTruth {
  Matrix dictionary;                                  // D*
  BlockStructure structure{std::vector<int>{0}, 1};   // d*
  Matrix coefficients;                                // Theta*
  Matrix signals;                                     // X = D* Theta* (noiseless)
};

/// Random dictionary: i.i.d. standard normal entries, columns normalized.
inline Matrix generate_dictionary(int rows, int cols, std::uint64_t seed) {
  if (rows < 1 || cols < 1)
    throw DimensionMismatch("dictionary dimensions must be >= 1");
  Rng rng(mix_seed(seed, 0xD1C7ULL));
  Matrix dict(rows, cols);
  for (Eigen::Index c = 0; c < dict.cols(); ++c)
    for (Eigen::Index r = 0; r < dict.rows(); ++r) dict(r, c) = rng.normal();
  return normalize_columns(dict);
}

/// Contiguous block structure: block j covers the next sizes[j] atoms.
inline BlockStructure generate_block_structure(int num_atoms,
                                               const std::vector<int>& sizes) {
  int total = 0;
  for (int s : sizes) {
    if (s < 1) throw SizeMismatch("block sizes must be >= 1");
    total += s;
  }
  if (total != num_atoms)
    throw SizeMismatch("block sizes add up to " + std::to_string(total) +
                       ", expected " + std::to_string(num_atoms));
  std::vector<int> labels(static_cast<std::size_t>(num_atoms));
  int atom = 0, label = 0;
  int max_size = 1;
  for (int s : sizes) {
    max_size = std::max(max_size, s);
    for (int i = 0; i < s; ++i) labels[static_cast<std::size_t>(atom++)] = label;
    ++label;
  }
  return BlockStructure(std::move(labels), max_size);
}

/// Block-sparse signals: each column activates k distinct blocks chosen
/// uniformly at random, with coefficients i.i.d. uniform on [-1, 1].
/// Returns (X, Theta*) with X = D* Theta*.
inline std::pair<Matrix, Matrix> generate_signals(const Matrix& dict,
                                                  const BlockStructure& d,
                                                  int blocks_per_signal,
                                                  int num_signals,
                                                  std::uint64_t seed) {
  if (dict.cols() != d.atom_count())
    throw DimensionMismatch("block structure does not match dictionary");
  const auto blocks = d.block_lists();
  const int num_blocks = static_cast<int>(blocks.size());
  if (blocks_per_signal < 1 || blocks_per_signal > num_blocks)
    throw InfeasibleSparsity("cannot pick " + std::to_string(blocks_per_signal) +
                             " distinct blocks out of " +
                             std::to_string(num_blocks));
  Rng rng(mix_seed(seed, 0x516EA15ULL));
  Matrix theta = Matrix::Zero(dict.cols(), num_signals);
  for (int i = 0; i < num_signals; ++i) {
    const auto chosen = rng.sample_without_replacement(num_blocks, blocks_per_signal);
    for (int b : chosen)
      for (int atom : blocks[static_cast<std::size_t>(b)].second)
        theta(atom, i) = rng.uniform(-1.0, 1.0);
  }
  return {dict * theta, theta};
}

/// Adds white Gaussian noise scaled so that the signal-to-noise power ratio
/// ||X||_F^2 / ||E||_F^2 is exactly 10^(snr_db/10). An infinite snr_db
/// returns X unchanged.
inline Matrix add_noise(const Matrix& x, double snr_db, std::uint64_t seed) {
  if (std::isinf(snr_db) && snr_db > 0.0) return x;
  const double signal_norm = x.norm();
  if (signal_norm == 0.0) throw ZeroSignal("cannot set an SNR on a zero signal");
  Rng rng(mix_seed(seed, 0x4015EULL));
  Matrix noise(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (Eigen::Index r = 0; r < x.rows(); ++r) noise(r, c) = rng.normal();
  const double target_noise_norm = signal_norm / std::pow(10.0, snr_db / 20.0);
  return x + noise * (target_noise_norm / noise.norm());
}

/// Lower-bound baseline: BOMP coding with the true dictionary and block
/// structure. Returns the coefficients and the normalized error.
inline std::pair<Matrix, double> oracle_run(const Matrix& true_dict,
                                            const BlockStructure& true_d,
                                            const Matrix& x, int blocks_per_signal,
                                            double residual_tol = 1e-12,
                                            int threads = 1) {
  const CodingBudget budget{blocks_per_signal, residual_tol};
  Matrix theta = code_matrix(true_dict, &true_d, x, budget, threads);
  const double e = representation_error(x, true_dict, theta);
  return {std::move(theta), e};
}

}  // namespace bsdl
