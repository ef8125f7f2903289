#pragma once

#include <map>
#include <vector>

#include "bsdl/types.hpp"

namespace bsdl {

/// omega[j]: sorted indices of the signals whose representation uses block j.
struct SupportSets {
  std::map<int, std::vector<int>> omega;
};

/// Computes omega_j = { i : ||Theta_i restricted to block j||_2 > 0 } for
/// every nonempty block label. Nonzero means the stored value differs from
/// exact zero; coders write structural zeros.
inline SupportSets support_sets(const Matrix& theta, const BlockStructure& d) {
  if (theta.rows() != d.atom_count())
    throw DimensionMismatch("coefficient rows " + std::to_string(theta.rows()) +
                            " do not match atom count " +
                            std::to_string(d.atom_count()));
  SupportSets out;
  for (const auto& [label, atoms] : d.block_lists()) {
    std::vector<int>& omega = out.omega[label];
    for (int i = 0; i < theta.cols(); ++i) {
      for (int atom : atoms) {
        if (theta(atom, i) != 0.0) {
          omega.push_back(i);
          break;
        }
      }
    }
  }
  return out;
}

/// Total block sparsity of Theta over d: sum_i ||Theta_i||_{0,d}, which
/// equals sum_j |omega_j|.
inline long long block_sparsity_objective(const Matrix& theta,
                                          const BlockStructure& d) {
  long long total = 0;
  for (const auto& [label, omega] : support_sets(theta, d).omega)
    total += static_cast<long long>(omega.size());
  return total;
}

struct MergeRecord {
  int kept_label = 0;
  int removed_label = 0;
  int intersection = 0;        // |omega_kept ∩ omega_removed| before the merge
  long long objective_after = 0;
};

struct SacResult {
  BlockStructure structure;
  long long initial_objective = 0;
  std::vector<MergeRecord> merges;
};

namespace detail {

inline int sorted_intersection_size(const std::vector<int>& a,
                                    const std::vector<int>& b) {
  int count = 0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (a[i] > b[j]) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

inline std::vector<int> sorted_union(const std::vector<int>& a,
                                     const std::vector<int>& b) {
  std::vector<int> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i] < b[j])) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j] < a[i]) {
      out.push_back(b[j++]);
    } else {
      out.push_back(a[i]);
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace detail

/// Sparse agglomerative clustering. Starts from the all-singleton structure
/// and repeatedly merges the pair of blocks whose usage sets overlap the
/// most, subject to the merged size staying within max_block_size. Merging
/// continues while any pair fits, even at zero overlap: it never hurts the
/// objective and frees sparsity budget. Ties pick the lexicographically
/// smallest label pair; the smaller label survives a merge.
///
/// Pairwise intersection sizes are kept incrementally: a merge refreshes
/// only the rows/columns touching the surviving block.
inline SacResult sac_cluster(const Matrix& theta, int max_block_size) {
  if (theta.rows() < 1) throw DimensionMismatch("need at least one atom row");
  if (max_block_size < 1) throw InfeasibleConfig("max block size must be >= 1");
  check_finite(theta, "coefficient matrix");

  const int num_atoms = static_cast<int>(theta.rows());
  const int num_signals = static_cast<int>(theta.cols());

  // Singleton start: block label == atom index.
  std::vector<std::vector<int>> omega(static_cast<std::size_t>(num_atoms));
  for (int j = 0; j < num_atoms; ++j)
    for (int i = 0; i < num_signals; ++i)
      if (theta(j, i) != 0.0) omega[static_cast<std::size_t>(j)].push_back(i);

  std::vector<std::vector<int>> members(static_cast<std::size_t>(num_atoms));
  std::vector<int> sizes(static_cast<std::size_t>(num_atoms), 1);
  std::vector<char> active(static_cast<std::size_t>(num_atoms), 1);
  for (int j = 0; j < num_atoms; ++j) members[static_cast<std::size_t>(j)] = {j};

  SacResult result{BlockStructure::singleton(num_atoms, max_block_size), 0, {}};
  for (const auto& om : omega)
    result.initial_objective += static_cast<long long>(om.size());
  long long objective = result.initial_objective;

  // Upper-triangular intersection table, only j1 < j2 entries used.
  std::vector<std::vector<int>> inter(static_cast<std::size_t>(num_atoms));
  for (int j1 = 0; j1 < num_atoms; ++j1) {
    inter[static_cast<std::size_t>(j1)].resize(static_cast<std::size_t>(num_atoms), 0);
    for (int j2 = j1 + 1; j2 < num_atoms; ++j2)
      inter[static_cast<std::size_t>(j1)][static_cast<std::size_t>(j2)] =
          detail::sorted_intersection_size(omega[static_cast<std::size_t>(j1)],
                                           omega[static_cast<std::size_t>(j2)]);
  }

  while (true) {
    int best1 = -1, best2 = -1, best_inter = -1;
    for (int j1 = 0; j1 < num_atoms; ++j1) {
      if (!active[static_cast<std::size_t>(j1)]) continue;
      for (int j2 = j1 + 1; j2 < num_atoms; ++j2) {
        if (!active[static_cast<std::size_t>(j2)]) continue;
        if (sizes[static_cast<std::size_t>(j1)] + sizes[static_cast<std::size_t>(j2)] >
            max_block_size)
          continue;
        const int candidate =
            inter[static_cast<std::size_t>(j1)][static_cast<std::size_t>(j2)];
        if (candidate > best_inter) {
          best_inter = candidate;
          best1 = j1;
          best2 = j2;
        }
      }
    }
    if (best1 < 0) break;

    omega[static_cast<std::size_t>(best1)] =
        detail::sorted_union(omega[static_cast<std::size_t>(best1)],
                             omega[static_cast<std::size_t>(best2)]);
    omega[static_cast<std::size_t>(best2)].clear();
    sizes[static_cast<std::size_t>(best1)] += sizes[static_cast<std::size_t>(best2)];
    auto& absorbed = members[static_cast<std::size_t>(best2)];
    auto& kept = members[static_cast<std::size_t>(best1)];
    kept.insert(kept.end(), absorbed.begin(), absorbed.end());
    absorbed.clear();
    active[static_cast<std::size_t>(best2)] = 0;
    objective -= best_inter;
    result.merges.push_back({best1, best2, best_inter, objective});

    for (int m = 0; m < num_atoms; ++m) {
      if (!active[static_cast<std::size_t>(m)] || m == best1) continue;
      const int lo = std::min(m, best1), hi = std::max(m, best1);
      inter[static_cast<std::size_t>(lo)][static_cast<std::size_t>(hi)] =
          detail::sorted_intersection_size(omega[static_cast<std::size_t>(best1)],
                                           omega[static_cast<std::size_t>(m)]);
    }
  }

  std::vector<int> labels(static_cast<std::size_t>(num_atoms), 0);
  for (int j = 0; j < num_atoms; ++j)
    if (active[static_cast<std::size_t>(j)])
      for (int atom : members[static_cast<std::size_t>(j)])
        labels[static_cast<std::size_t>(atom)] = j;
  result.structure = BlockStructure(std::move(labels), max_block_size);
  return result;
}

}  // namespace bsdl
