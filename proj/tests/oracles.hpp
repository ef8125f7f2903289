// Independent reference implementations used by the unit and acceptance
// suites: exhaustive searches, alternative decompositions, and slow
// recomputations that must stay decoupled from the library code paths they
// check.
#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "bsdl/pursuit.hpp"
#include "bsdl/sac.hpp"
#include "bsdl/types.hpp"

namespace oracles {

using bsdl::Matrix;
using bsdl::Vector;

// Best support of exactly `size` atoms by exhaustive least squares; returns
// the sorted support with minimal residual.
inline std::vector<int> best_support_exhaustive(const Matrix& dict,
                                                const Vector& x, int size) {
  const int num_atoms = static_cast<int>(dict.cols());
  std::vector<int> best;
  double best_err = std::numeric_limits<double>::infinity();
  std::vector<int> idx(static_cast<std::size_t>(size));
  // Simple lexicographic combination walk.
  for (int i = 0; i < size; ++i) idx[static_cast<std::size_t>(i)] = i;
  while (true) {
    Matrix sub(dict.rows(), size);
    for (int i = 0; i < size; ++i) sub.col(i) = dict.col(idx[static_cast<std::size_t>(i)]);
    const Vector coeffs = sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(x);
    const double err = (x - sub * coeffs).norm();
    if (err < best_err) {
      best_err = err;
      best = idx;
    }
    int move = size - 1;
    while (move >= 0 && idx[static_cast<std::size_t>(move)] == num_atoms - size + move) --move;
    if (move < 0) break;
    ++idx[static_cast<std::size_t>(move)];
    for (int i = move + 1; i < size; ++i)
      idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
  }
  return best;
}

// Best pair of blocks by exhaustive least squares over the union of their
// atoms; returns sorted block indices into `blocks`.
inline std::vector<int> best_block_pair_exhaustive(
    const Matrix& dict, const std::vector<std::vector<int>>& blocks,
    const Vector& x) {
  const int num_blocks = static_cast<int>(blocks.size());
  std::vector<int> best;
  double best_err = std::numeric_limits<double>::infinity();
  for (int b1 = 0; b1 < num_blocks; ++b1) {
    for (int b2 = b1 + 1; b2 < num_blocks; ++b2) {
      std::vector<int> atoms = blocks[static_cast<std::size_t>(b1)];
      atoms.insert(atoms.end(), blocks[static_cast<std::size_t>(b2)].begin(),
                   blocks[static_cast<std::size_t>(b2)].end());
      Matrix sub(dict.rows(), static_cast<Eigen::Index>(atoms.size()));
      for (std::size_t i = 0; i < atoms.size(); ++i)
        sub.col(static_cast<Eigen::Index>(i)) = dict.col(atoms[i]);
      const Vector coeffs =
          sub.jacobiSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(x);
      const double err = (x - sub * coeffs).norm();
      if (err < best_err) {
        best_err = err;
        best = {b1, b2};
      }
    }
  }
  return best;
}

// Singular values via the eigendecomposition of R'R (or RR'), independent of
// any SVD routine.
inline Vector singular_values_by_eig(const Matrix& r) {
  const bool wide = r.cols() >= r.rows();
  const Matrix gram = wide ? Matrix(r * r.transpose()) : Matrix(r.transpose() * r);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  Vector vals = eig.eigenvalues();  // ascending
  Vector sigma(vals.size());
  for (Eigen::Index i = 0; i < vals.size(); ++i)
    sigma[i] = std::sqrt(std::max(0.0, vals[vals.size() - 1 - i]));
  return sigma;
}

// Top singular triplet by power iteration on R'R.
inline void rank1_power_iteration(const Matrix& r, Vector& u, double& sigma,
                                  Vector& v) {
  v = Vector::Ones(r.cols());
  v /= v.norm();
  for (int it = 0; it < 2000; ++it) {
    Vector next = r.transpose() * (r * v);
    const double norm = next.norm();
    if (norm == 0.0) break;
    next /= norm;
    const double delta = (next - v).norm();
    v = next;
    if (delta < 1e-14) break;
  }
  const Vector rv = r * v;
  sigma = rv.norm();
  u = sigma > 0 ? Vector(rv / sigma) : Vector(Vector::Zero(r.rows()));
}

// All partitions of {0..n-1} into parts of size <= max_part, visiting each
// partition once; func receives the part label of every element.
template <typename Func>
void for_each_partition(int n, int max_part, Func&& func) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::vector<int> part_sizes;
  const auto recurse = [&](auto&& self, int element) -> void {
    if (element == n) {
      func(labels);
      return;
    }
    for (std::size_t part = 0; part < part_sizes.size(); ++part) {
      if (part_sizes[part] >= max_part) continue;
      labels[static_cast<std::size_t>(element)] = static_cast<int>(part);
      ++part_sizes[part];
      self(self, element + 1);
      --part_sizes[part];
    }
    labels[static_cast<std::size_t>(element)] = static_cast<int>(part_sizes.size());
    part_sizes.push_back(1);
    self(self, element + 1);
    part_sizes.pop_back();
    labels[static_cast<std::size_t>(element)] = -1;
  };
  recurse(recurse, 0);
}

// Minimal block-sparsity objective over every feasible partition.
inline long long min_objective_exhaustive(const Matrix& theta, int max_block_size) {
  long long best = std::numeric_limits<long long>::max();
  for_each_partition(static_cast<int>(theta.rows()), max_block_size,
                     [&](const std::vector<int>& labels) {
                       bsdl::BlockStructure d(labels, max_block_size);
                       best = std::min(best, bsdl::block_sparsity_objective(theta, d));
                     });
  return best;
}

// SAC reference: identical greedy policy, but every pairwise intersection is
// recomputed from scratch at every step instead of being maintained
// incrementally.
inline bsdl::BlockStructure sac_cluster_reference(const Matrix& theta,
                                                  int max_block_size) {
  const int num_atoms = static_cast<int>(theta.rows());
  std::vector<std::vector<int>> omega(static_cast<std::size_t>(num_atoms));
  for (int j = 0; j < num_atoms; ++j)
    for (int i = 0; i < theta.cols(); ++i)
      if (theta(j, i) != 0.0) omega[static_cast<std::size_t>(j)].push_back(i);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(num_atoms));
  for (int j = 0; j < num_atoms; ++j) members[static_cast<std::size_t>(j)] = {j};
  std::vector<char> active(static_cast<std::size_t>(num_atoms), 1);

  while (true) {
    int best1 = -1, best2 = -1, best_inter = -1;
    for (int j1 = 0; j1 < num_atoms; ++j1) {
      if (!active[static_cast<std::size_t>(j1)]) continue;
      for (int j2 = j1 + 1; j2 < num_atoms; ++j2) {
        if (!active[static_cast<std::size_t>(j2)]) continue;
        if (static_cast<int>(members[static_cast<std::size_t>(j1)].size() +
                             members[static_cast<std::size_t>(j2)].size()) >
            max_block_size)
          continue;
        int inter = 0;
        for (int a : omega[static_cast<std::size_t>(j1)])
          for (int b : omega[static_cast<std::size_t>(j2)])
            if (a == b) ++inter;
        if (inter > best_inter) {
          best_inter = inter;
          best1 = j1;
          best2 = j2;
        }
      }
    }
    if (best1 < 0) break;
    auto& target = omega[static_cast<std::size_t>(best1)];
    for (int b : omega[static_cast<std::size_t>(best2)])
      if (std::find(target.begin(), target.end(), b) == target.end())
        target.push_back(b);
    std::sort(target.begin(), target.end());
    omega[static_cast<std::size_t>(best2)].clear();
    auto& kept = members[static_cast<std::size_t>(best1)];
    kept.insert(kept.end(), members[static_cast<std::size_t>(best2)].begin(),
                members[static_cast<std::size_t>(best2)].end());
    active[static_cast<std::size_t>(best2)] = 0;
  }

  std::vector<int> labels(static_cast<std::size_t>(num_atoms), 0);
  for (int j = 0; j < num_atoms; ++j)
    if (active[static_cast<std::size_t>(j)])
      for (int atom : members[static_cast<std::size_t>(j)])
        labels[static_cast<std::size_t>(atom)] = j;
  return bsdl::BlockStructure(labels, max_block_size);
}

// Classical Gram-Schmidt orthonormalization (columns assumed independent).
inline Matrix gram_schmidt(const Matrix& a) {
  Matrix q(a.rows(), a.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    Vector v = a.col(j);
    for (Eigen::Index i = 0; i < kept; ++i) v -= q.col(i).dot(a.col(j)) * q.col(i);
    const double norm = v.norm();
    if (norm > 1e-12) q.col(kept++) = v / norm;
  }
  return q.leftCols(kept);
}

// Subspace distance through principal angles: orthonormalize by
// Gram-Schmidt, take the singular values of Q1'Q2 as cosines.
inline double block_distance_principal_angles(const Matrix& s1, const Matrix& s2) {
  const Matrix q1 = gram_schmidt(s1);
  const Matrix q2 = gram_schmidt(s2);
  const Matrix overlap = q1.transpose() * q2;
  Eigen::JacobiSVD<Matrix> svd(overlap);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < svd.singularValues().size(); ++i) {
    const double c = std::min(1.0, svd.singularValues()[i]);
    sum += c * c;
  }
  const double denom = static_cast<double>(std::max(s1.cols(), s2.cols()));
  return std::sqrt(std::max(0.0, 1.0 - sum / denom));
}

}  // namespace oracles
