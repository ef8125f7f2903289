#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bsdl/pursuit.hpp"
#include "bsdl/types.hpp"

namespace bsdl {

/// Normalized representation error ||X - D*Theta||_F / ||X||_F.
inline double representation_error(const Matrix& x, const Matrix& dict,
                                   const Matrix& theta) {
  if (dict.rows() != x.rows() || dict.cols() != theta.rows() ||
      theta.cols() != x.cols())
    throw DimensionMismatch("inconsistent shapes in representation error");
  const double denom = x.norm();
  if (denom == 0.0) throw ZeroSignal("signal matrix has zero Frobenius norm");
  return (x - dict * theta).norm() / denom;
}

/// Normalized subspace distance between two atom blocks:
/// sqrt(1 - ||Q1' Q2||_F^2 / max(s1, s2)), both blocks orthonormalized by
/// reduced QR first. 0 for identical subspaces of equal size, 1 for
/// mutually orthogonal ones.
inline double block_distance(const Matrix& block1, const Matrix& block2) {
  if (block1.rows() != block2.rows())
    throw DimensionMismatch("blocks live in different signal dimensions");
  const Matrix q1 = orthonormal_basis(block1);
  const Matrix q2 = orthonormal_basis(block2);
  if (q1.cols() == 0 || q2.cols() == 0)
    throw ZeroBlock("block has rank zero");
  const double overlap = (q1.transpose() * q2).squaredNorm();
  const double denom = static_cast<double>(std::max(block1.cols(), block2.cols()));
  const double inside = 1.0 - overlap / denom;
  return std::sqrt(std::max(0.0, inside));
}

enum class MatchMode { Greedy, Optimal };

namespace detail {

inline std::vector<Matrix> extract_blocks(const Matrix& dict,
                                          const BlockStructure& d) {
  std::vector<Matrix> out;
  for (const auto& [label, atoms] : d.block_lists()) {
    Matrix block(dict.rows(), static_cast<Eigen::Index>(atoms.size()));
    for (std::size_t i = 0; i < atoms.size(); ++i)
      block.col(static_cast<Eigen::Index>(i)) = dict.col(atoms[i]);
    out.push_back(std::move(block));
  }
  return out;
}

// Hungarian algorithm (shortest augmenting path), O(n^3); pads a
// rectangular cost matrix with zero-cost dummy entries.
inline std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int rows = static_cast<int>(cost.size());
  const int cols = rows ? static_cast<int>(cost[0].size()) : 0;
  const int n = std::max(rows, cols);
  const double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(n + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(n + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n + 1), kInf);
    std::vector<char> used(static_cast<std::size_t>(n + 1), 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double c =
            (i0 - 1 < rows && j - 1 < cols) ? cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] : 0.0;
        const double cur = c - u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> match(static_cast<std::size_t>(rows), -1);
  for (int j = 1; j <= n; ++j) {
    const int i = p[static_cast<std::size_t>(j)];
    if (i >= 1 && i <= rows && j <= cols) match[static_cast<std::size_t>(i - 1)] = j - 1;
  }
  return match;
}

}  // namespace detail

/// Percentage of ground-truth blocks recovered by the learned dictionary:
/// learned and true blocks are paired without repetition (greedy
/// globally-closest by default, optimal assignment behind MatchMode::Optimal)
/// and a pairing counts as a recovery when its subspace distance is below
/// 0.01. The denominator is the number of true blocks.
inline double recovery_percentage(const Matrix& dict, const BlockStructure& d,
                                  const Matrix& true_dict,
                                  const BlockStructure& true_d,
                                  MatchMode mode = MatchMode::Greedy) {
  const auto learned = detail::extract_blocks(dict, d);
  const auto truth = detail::extract_blocks(true_dict, true_d);
  const int nl = static_cast<int>(learned.size());
  const int nt = static_cast<int>(truth.size());
  std::vector<std::vector<double>> dist(static_cast<std::size_t>(nl),
                                        std::vector<double>(static_cast<std::size_t>(nt), 0.0));
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nt; ++j)
      dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          block_distance(learned[static_cast<std::size_t>(i)], truth[static_cast<std::size_t>(j)]);

  constexpr double kRecoveryThreshold = 0.01;
  int recovered = 0;
  if (mode == MatchMode::Optimal) {
    const auto match = detail::min_cost_assignment(dist);
    for (int i = 0; i < nl; ++i) {
      const int j = match[static_cast<std::size_t>(i)];
      if (j >= 0 && dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < kRecoveryThreshold)
        ++recovered;
    }
  } else {
    std::vector<char> used_l(static_cast<std::size_t>(nl), 0);
    std::vector<char> used_t(static_cast<std::size_t>(nt), 0);
    for (int step = 0; step < std::min(nl, nt); ++step) {
      int bi = -1, bj = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i < nl; ++i) {
        if (used_l[static_cast<std::size_t>(i)]) continue;
        for (int j = 0; j < nt; ++j) {
          if (used_t[static_cast<std::size_t>(j)]) continue;
          if (dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < best) {
            best = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
            bi = i;
            bj = j;
          }
        }
      }
      if (bi < 0 || bj < 0) break;
      used_l[static_cast<std::size_t>(bi)] = 1;
      used_t[static_cast<std::size_t>(bj)] = 1;
      if (best < kRecoveryThreshold) ++recovered;
    }
  }
  return 100.0 * static_cast<double>(recovered) / static_cast<double>(nt);
}

}  // namespace bsdl
