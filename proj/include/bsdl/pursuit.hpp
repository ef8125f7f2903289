#pragma once

#include <atomic>
#include <limits>
#include <thread>
#include <vector>

#include "bsdl/types.hpp"

namespace bsdl {

/// Stopping rule for a greedy coder: at most max_atoms_or_blocks selections
/// (atoms for OMP, blocks for BOMP), early exit once the residual l2-norm
/// drops to residual_tol.
struct CodingBudget {
  int max_atoms_or_blocks = 1;
  double residual_tol = 1e-12;
};

class ColumnCodingError : public Error {
public:
  ColumnCodingError(int column, const std::string& inner)
      : Error("coding failed for signal column " + std::to_string(column) +
              ": " + inner),
        column_(column) {}
  int column() const { return column_; }

private:
  int column_;
};

// Scores within this distance of the per-iteration maximum are treated as
// tied; the lowest index wins. Keeps selections deterministic across
// platforms and thread counts.
inline constexpr double kScoreTieTol = 1e-12;

/// Minimum-norm least squares (column-pivoted QR / complete orthogonal
/// decomposition). Rank-deficient systems are solved, not rejected;
/// SingularLeastSquares is reserved for NaN/Inf inputs.
inline Vector solve_least_squares(const Matrix& a, const Vector& b) {
  if (!a.allFinite() || !b.allFinite())
    throw SingularLeastSquares("least-squares input contains NaN or Inf");
  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(a);
  return cod.solve(b);
}

/// Orthonormal basis of range(a) via column-pivoted QR; returns N x rank(a).
/// A rank-zero input yields an N x 0 matrix.
inline Matrix orthonormal_basis(const Matrix& a) {
  Eigen::ColPivHouseholderQR<Matrix> qr(a);
  const Eigen::Index rank = qr.rank();
  if (rank == 0) return Matrix(a.rows(), 0);
  return qr.householderQ() * Matrix::Identity(a.rows(), rank);
}

namespace detail {

// Lowest index within kScoreTieTol of the maximum score; -1 when every
// candidate is exhausted or the best score is exactly zero.
inline int pick_candidate(const std::vector<double>& scores) {
  double best = -1.0;
  for (double s : scores)
    if (s > best) best = s;
  if (best <= 0.0) return -1;
  for (std::size_t j = 0; j < scores.size(); ++j)
    if (scores[j] >= 0.0 && best - scores[j] < kScoreTieTol)
      return static_cast<int>(j);
  return -1;
}

}  // namespace detail

/// Orthogonal matching pursuit. Grows the support by maximal absolute
/// correlation with the residual, re-fitting all selected coefficients by
/// least squares after each selection.
inline Vector omp(const Matrix& dict, const Vector& x, const CodingBudget& budget) {
  if (dict.rows() != x.size())
    throw DimensionMismatch("signal length " + std::to_string(x.size()) +
                            " does not match dictionary rows " +
                            std::to_string(dict.rows()));
  if (budget.max_atoms_or_blocks < 1)
    throw InfeasibleConfig("coding budget must be >= 1");

  const int num_atoms = static_cast<int>(dict.cols());
  const int max_picks = std::min(budget.max_atoms_or_blocks, num_atoms);
  Vector theta = Vector::Zero(num_atoms);
  Vector residual = x;
  std::vector<int> support;
  support.reserve(static_cast<std::size_t>(max_picks));
  std::vector<char> used(static_cast<std::size_t>(num_atoms), 0);
  std::vector<double> scores(static_cast<std::size_t>(num_atoms));
  Matrix sub(dict.rows(), max_picks);
  Vector coeffs;

  for (int pick = 0; pick < max_picks; ++pick) {
    if (residual.norm() <= budget.residual_tol) break;
    for (int j = 0; j < num_atoms; ++j)
      scores[static_cast<std::size_t>(j)] =
          used[static_cast<std::size_t>(j)] ? -1.0
                                            : std::abs(dict.col(j).dot(residual));
    const int chosen = detail::pick_candidate(scores);
    if (chosen < 0) break;
    used[static_cast<std::size_t>(chosen)] = 1;
    support.push_back(chosen);
    sub.col(static_cast<Eigen::Index>(support.size()) - 1) = dict.col(chosen);
    const auto active = sub.leftCols(static_cast<Eigen::Index>(support.size()));
    coeffs = solve_least_squares(active, x);
    residual = x - active * coeffs;
  }
  for (std::size_t i = 0; i < support.size(); ++i)
    theta[support[i]] = coeffs[static_cast<Eigen::Index>(i)];
  return theta;
}

/// Block OMP. Each iteration scores every unselected block by the residual
/// energy captured by an orthonormal basis of the block (reduced QR,
/// computed once per call) and selects the best; coefficients are re-fit by
/// least squares on the original atoms of all selected blocks. Single-atom
/// blocks score as plain |<atom, residual>| so that an all-singleton
/// structure reproduces omp() bit for bit.
inline Vector bomp(const Matrix& dict, const BlockStructure& d, const Vector& x,
                   const CodingBudget& budget) {
  if (dict.rows() != x.size())
    throw DimensionMismatch("signal length does not match dictionary rows");
  if (d.atom_count() != dict.cols())
    throw DimensionMismatch("block structure covers " +
                            std::to_string(d.atom_count()) +
                            " atoms, dictionary has " +
                            std::to_string(dict.cols()));
  if (budget.max_atoms_or_blocks < 1)
    throw InfeasibleConfig("coding budget must be >= 1");

  const auto blocks = d.block_lists();
  const int num_blocks = static_cast<int>(blocks.size());
  const int max_picks = std::min(budget.max_atoms_or_blocks, num_blocks);

  std::vector<Matrix> bases(static_cast<std::size_t>(num_blocks));
  int support_capacity = 0;
  for (int b = 0; b < num_blocks; ++b) {
    const auto& atoms = blocks[static_cast<std::size_t>(b)].second;
    support_capacity += static_cast<int>(atoms.size());
    if (atoms.size() > 1) {
      Matrix block(dict.rows(), static_cast<Eigen::Index>(atoms.size()));
      for (std::size_t i = 0; i < atoms.size(); ++i)
        block.col(static_cast<Eigen::Index>(i)) = dict.col(atoms[i]);
      bases[static_cast<std::size_t>(b)] = orthonormal_basis(block);
    }
  }

  Vector theta = Vector::Zero(dict.cols());
  Vector residual = x;
  std::vector<int> support;
  support.reserve(static_cast<std::size_t>(support_capacity));
  std::vector<char> used(static_cast<std::size_t>(num_blocks), 0);
  std::vector<double> scores(static_cast<std::size_t>(num_blocks));
  Matrix sub(dict.rows(), support_capacity);
  Vector coeffs;

  for (int pick = 0; pick < max_picks; ++pick) {
    if (residual.norm() <= budget.residual_tol) break;
    for (int b = 0; b < num_blocks; ++b) {
      if (used[static_cast<std::size_t>(b)]) {
        scores[static_cast<std::size_t>(b)] = -1.0;
        continue;
      }
      const auto& atoms = blocks[static_cast<std::size_t>(b)].second;
      if (atoms.size() == 1)
        scores[static_cast<std::size_t>(b)] =
            std::abs(dict.col(atoms[0]).dot(residual));
      else
        scores[static_cast<std::size_t>(b)] =
            (bases[static_cast<std::size_t>(b)].transpose() * residual).norm();
    }
    const int chosen = detail::pick_candidate(scores);
    if (chosen < 0) break;
    used[static_cast<std::size_t>(chosen)] = 1;
    for (int atom : blocks[static_cast<std::size_t>(chosen)].second) {
      support.push_back(atom);
      sub.col(static_cast<Eigen::Index>(support.size()) - 1) = dict.col(atom);
    }
    const auto active = sub.leftCols(static_cast<Eigen::Index>(support.size()));
    coeffs = solve_least_squares(active, x);
    residual = x - active * coeffs;
  }
  for (std::size_t i = 0; i < support.size(); ++i)
    theta[support[i]] = coeffs[static_cast<Eigen::Index>(i)];
  return theta;
}

/// Codes every column of X independently: omp() when no block structure is
/// given, bomp() otherwise. Columns are independent, so the result is
/// identical for any thread count.
inline Matrix code_matrix(const Matrix& dict, const BlockStructure* d,
                          const Matrix& x, const CodingBudget& budget,
                          int threads = 1) {
  if (dict.rows() != x.rows())
    throw DimensionMismatch("signal rows do not match dictionary rows");
  if (d && d->atom_count() != dict.cols())
    throw DimensionMismatch("block structure does not match dictionary");

  const int num_cols = static_cast<int>(x.cols());
  Matrix theta(dict.cols(), num_cols);
  if (num_cols == 0) return theta;

  const auto code_column = [&](int i) {
    try {
      theta.col(i) = d ? bomp(dict, *d, x.col(i), budget)
                       : omp(dict, x.col(i), budget);
    } catch (const Error& e) {
      throw ColumnCodingError(i, e.what());
    }
  };

  const int worker_count = std::max(1, std::min(threads, num_cols));
  if (worker_count == 1) {
    for (int i = 0; i < num_cols; ++i) code_column(i);
    return theta;
  }

  // Contiguous column ranges per worker; the lowest failing column wins so
  // the reported error matches a serial run.
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(worker_count));
  std::vector<int> error_cols(static_cast<std::size_t>(worker_count),
                              std::numeric_limits<int>::max());
  const int chunk = (num_cols + worker_count - 1) / worker_count;
  for (int w = 0; w < worker_count; ++w) {
    const int begin = w * chunk;
    const int end = std::min(num_cols, begin + chunk);
    pool.emplace_back([&, w, begin, end] {
      for (int i = begin; i < end; ++i) {
        try {
          code_column(i);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
          error_cols[static_cast<std::size_t>(w)] = i;
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  int first = -1;
  for (int w = 0; w < worker_count; ++w) {
    if (errors[static_cast<std::size_t>(w)] &&
        (first < 0 || error_cols[static_cast<std::size_t>(w)] < error_cols[static_cast<std::size_t>(first)]))
      first = w;
  }
  if (first >= 0) std::rethrow_exception(errors[static_cast<std::size_t>(first)]);
  return theta;
}

}  // namespace bsdl
