#pragma once

#include <vector>

#include "bsdl/metrics.hpp"
#include "bsdl/pursuit.hpp"
#include "bsdl/rng.hpp"
#include "bsdl/types.hpp"

namespace bsdl {

namespace detail {

inline std::vector<int> nonzero_columns_over_rows(const Matrix& theta,
                                                  const std::vector<int>& rows) {
  std::vector<int> cols;
  for (int i = 0; i < theta.cols(); ++i) {
    for (int r : rows) {
      if (theta(r, i) != 0.0) {
        cols.push_back(i);
        break;
      }
    }
  }
  return cols;
}

}  // namespace detail

/// Residual of the signals in omega with the given atoms' contribution
/// removed from the model: R = X_omega - sum_{i not in atoms} D_i Theta^i_omega.
inline Matrix block_residual(const Matrix& x, const Matrix& dict,
                             const Matrix& theta, const std::vector<int>& atoms,
                             const std::vector<int>& omega) {
  Matrix r(x.rows(), static_cast<Eigen::Index>(omega.size()));
  for (std::size_t c = 0; c < omega.size(); ++c) {
    const int col = omega[c];
    r.col(static_cast<Eigen::Index>(c)) = x.col(col) - dict * theta.col(col);
    for (int atom : atoms)
      r.col(static_cast<Eigen::Index>(c)) += dict.col(atom) * theta(atom, col);
  }
  return r;
}

namespace detail {

// Rank-|atoms| SVD update shared by the block and single-atom paths:
// D_atoms <- leading left singular vectors of R, coefficient rows over omega
// <- sigma_i * v_i'. Missing directions (rank(R) structurally below the
// block size) are filled with seeded orthonormal completions and zero
// coefficients, so they are inert. Each singular vector is sign-flipped so
// its largest-magnitude entry is positive.
inline void svd_rank_update(Matrix& dict, Matrix& theta, const Matrix& x,
                            const std::vector<int>& atoms,
                            const std::vector<int>& omega) {
  const Matrix r = block_residual(x, dict, theta, atoms, omega);
  const int block_size = static_cast<int>(atoms.size());
  Eigen::BDCSVD<Matrix> svd(r, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const int available =
      std::min<int>(static_cast<int>(svd.singularValues().size()), block_size);

  Matrix new_atoms(dict.rows(), block_size);
  for (int i = 0; i < available; ++i) {
    Vector u = svd.matrixU().col(i);
    Vector v = svd.matrixV().col(i);
    Eigen::Index flip_idx = 0;
    u.cwiseAbs().maxCoeff(&flip_idx);
    if (u[flip_idx] < 0.0) {
      u = -u;
      v = -v;
    }
    const double sigma = svd.singularValues()[i];
    new_atoms.col(i) = u;
    for (std::size_t c = 0; c < omega.size(); ++c)
      theta(atoms[static_cast<std::size_t>(i)], omega[c]) =
          sigma * v[static_cast<Eigen::Index>(c)];
  }
  if (available < block_size) {
    // QR of a seeded random matrix projected onto the orthogonal complement
    // of the computed directions.
    Rng rng(mix_seed(0xB10C0C0DEULL, static_cast<std::uint64_t>(atoms[0]),
                     static_cast<std::uint64_t>(block_size)));
    const int missing = block_size - available;
    Matrix gauss(dict.rows(), missing);
    for (Eigen::Index cc = 0; cc < gauss.cols(); ++cc)
      for (Eigen::Index rr = 0; rr < gauss.rows(); ++rr)
        gauss(rr, cc) = rng.normal();
    const auto computed = new_atoms.leftCols(available);
    gauss -= computed * (computed.transpose() * gauss);
    Eigen::HouseholderQR<Matrix> qr(gauss);
    new_atoms.rightCols(missing) =
        qr.householderQ() * Matrix::Identity(dict.rows(), missing);
    for (int i = available; i < block_size; ++i)
      for (std::size_t c = 0; c < omega.size(); ++c)
        theta(atoms[static_cast<std::size_t>(i)], omega[c]) = 0.0;
  }
  for (int i = 0; i < block_size; ++i)
    dict.col(atoms[static_cast<std::size_t>(i)]) = new_atoms.col(i);
}

}  // namespace detail

/// Updates one dictionary block in place: the block becomes the best
/// rank-|d_j| approximation of its residual (orthonormal by construction),
/// and the corresponding coefficient rows are rewritten over omega_j. The
/// block-level sparsity pattern of Theta is preserved.
inline void bksvd_block_update(Matrix& dict, const BlockStructure& d,
                               Matrix& theta, const Matrix& x, int label) {
  if (dict.cols() != d.atom_count() || theta.rows() != d.atom_count() ||
      theta.cols() != x.cols() || dict.rows() != x.rows())
    throw DimensionMismatch("inconsistent shapes in block update");
  std::vector<int> atoms;
  for (int i = 0; i < d.atom_count(); ++i)
    if (d.label_of(i) == label) atoms.push_back(i);
  if (atoms.empty())
    throw EmptySupport(label);
  const auto omega = detail::nonzero_columns_over_rows(theta, atoms);
  if (omega.empty()) throw EmptySupport(label);
  detail::svd_rank_update(dict, theta, x, atoms, omega);
}

/// K-SVD single-atom update: rank-1 case of the block update with
/// omega_j = { i : Theta^j_i != 0 }.
inline void ksvd_atom_update(Matrix& dict, Matrix& theta, const Matrix& x,
                             int atom) {
  if (dict.cols() != theta.rows() || theta.cols() != x.cols() ||
      dict.rows() != x.rows())
    throw DimensionMismatch("inconsistent shapes in atom update");
  const std::vector<int> atoms{atom};
  const auto omega = detail::nonzero_columns_over_rows(theta, atoms);
  if (omega.empty()) throw EmptySupport(atom);
  detail::svd_rank_update(dict, theta, x, atoms, omega);
}

/// MOD dictionary update: D = X Theta' (Theta Theta')^-1, solved as a
/// minimum-norm least-squares problem so singular Theta Theta' is fine, then
/// column-normalized. Columns of unused atoms come out as zero and are
/// replaced by seeded random unit vectors.
inline Matrix mod_update(const Matrix& x, const Matrix& theta) {
  if (theta.cols() != x.cols())
    throw DimensionMismatch("signal count does not match coefficient columns");
  check_finite(x, "signal matrix");
  check_finite(theta, "coefficient matrix");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(theta.transpose());
  Matrix dict = cod.solve(x.transpose()).transpose();
  for (Eigen::Index j = 0; j < dict.cols(); ++j) {
    const double norm = dict.col(j).norm();
    if (norm < 1e-12) {
      Rng rng(mix_seed(0x40D0ULL, static_cast<std::uint64_t>(j)));
      Vector fresh(dict.rows());
      for (Eigen::Index i = 0; i < fresh.size(); ++i) fresh[i] = rng.normal();
      dict.col(j) = fresh / fresh.norm();
    } else {
      dict.col(j) /= norm;
    }
  }
  return dict;
}

/// One sweep of block updates in ascending label order. Blocks used by no
/// signal are skipped and reported.
inline std::vector<int> bksvd_pass(Matrix& dict, const BlockStructure& d,
                                   Matrix& theta, const Matrix& x) {
  std::vector<int> skipped;
  for (const auto& [label, atoms] : d.block_lists()) {
    const auto omega = detail::nonzero_columns_over_rows(theta, atoms);
    if (omega.empty()) {
      skipped.push_back(label);
      continue;
    }
    detail::svd_rank_update(dict, theta, x, atoms, omega);
  }
  return skipped;
}

/// One K-SVD sweep: sequential single-atom updates in ascending atom order,
/// skipping unused atoms.
inline std::vector<int> ksvd_sweep(Matrix& dict, Matrix& theta, const Matrix& x) {
  std::vector<int> skipped;
  for (int atom = 0; atom < dict.cols(); ++atom) {
    const auto omega = detail::nonzero_columns_over_rows(theta, {atom});
    if (omega.empty()) {
      skipped.push_back(atom);
      continue;
    }
    detail::svd_rank_update(dict, theta, x, {atom}, omega);
  }
  return skipped;
}

enum class DictUpdateMode { BlockSvd, AtomSvd };

struct InnerTraceRow {
  int iteration = 0;
  double coding_error = 0.0;  // after the coding step
  double error = 0.0;         // after the dictionary update
};

struct InnerLearnResult {
  Matrix dictionary;
  Matrix coefficients;
  std::vector<InnerTraceRow> trace;
};

inline constexpr double kLearnRelTol = 1e-6;

/// Alternates block-sparse coding (BOMP) with dictionary updates for a fixed
/// block structure. AtomSvd swaps the block update for per-atom K-SVD
/// updates while keeping the block-sparse coding, which isolates the value
/// of the joint block update.
inline InnerLearnResult bksvd_learn(const Matrix& x, const Matrix& dict0,
                                    const BlockStructure& d,
                                    const CodingBudget& budget, int iters,
                                    DictUpdateMode mode = DictUpdateMode::BlockSvd,
                                    double rel_tol = kLearnRelTol,
                                    int threads = 1) {
  check_signal_matrix(x);
  InnerLearnResult result;
  result.dictionary = dict0;
  double previous = -1.0;
  for (int it = 1; it <= iters; ++it) {
    result.coefficients = code_matrix(result.dictionary, &d, x, budget, threads);
    const double coding_error =
        representation_error(x, result.dictionary, result.coefficients);
    if (mode == DictUpdateMode::BlockSvd)
      bksvd_pass(result.dictionary, d, result.coefficients, x);
    else
      ksvd_sweep(result.dictionary, result.coefficients, x);
    const double error =
        representation_error(x, result.dictionary, result.coefficients);
    result.trace.push_back({it, coding_error, error});
    if (previous >= 0.0 &&
        std::abs(error - previous) / std::max(previous, 1e-15) < rel_tol)
      break;
    previous = error;
  }
  return result;
}

/// Standard K-SVD loop: OMP coding with a fixed number of nonzeros, then a
/// sequential atom-update sweep.
inline InnerLearnResult ksvd_learn(const Matrix& x, const Matrix& dict0,
                                   const CodingBudget& budget, int iters,
                                   double rel_tol = kLearnRelTol,
                                   int threads = 1) {
  check_signal_matrix(x);
  InnerLearnResult result;
  result.dictionary = dict0;
  double previous = -1.0;
  for (int it = 1; it <= iters; ++it) {
    result.coefficients =
        code_matrix(result.dictionary, nullptr, x, budget, threads);
    const double coding_error =
        representation_error(x, result.dictionary, result.coefficients);
    ksvd_sweep(result.dictionary, result.coefficients, x);
    const double error =
        representation_error(x, result.dictionary, result.coefficients);
    result.trace.push_back({it, coding_error, error});
    if (previous >= 0.0 &&
        std::abs(error - previous) / std::max(previous, 1e-15) < rel_tol)
      break;
    previous = error;
  }
  return result;
}

}  // namespace bsdl
