#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace bsdl {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// ----------------------------------------------------------------------
// Errors
// ----------------------------------------------------------------------

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class DimensionMismatch : public Error {
public:
  explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

class ZeroColumn : public Error {
public:
  explicit ZeroColumn(int index)
      : Error("column " + std::to_string(index) + " has (near-)zero norm"),
        index_(index) {}
  int index() const { return index_; }

private:
  int index_;
};

class SingularLeastSquares : public Error {
public:
  explicit SingularLeastSquares(const std::string& msg) : Error(msg) {}
};

class EmptySupport : public Error {
public:
  explicit EmptySupport(int label)
      : Error("block " + std::to_string(label) + " is used by no signal"),
        label_(label) {}
  int label() const { return label_; }

private:
  int label_;
};

class SizeMismatch : public Error {
public:
  explicit SizeMismatch(const std::string& msg) : Error(msg) {}
};

class InfeasibleSparsity : public Error {
public:
  explicit InfeasibleSparsity(const std::string& msg) : Error(msg) {}
};

class ZeroSignal : public Error {
public:
  explicit ZeroSignal(const std::string& msg) : Error(msg) {}
};

class ZeroBlock : public Error {
public:
  explicit ZeroBlock(const std::string& msg) : Error(msg) {}
};

class InfeasibleConfig : public Error {
public:
  explicit InfeasibleConfig(const std::string& msg) : Error(msg) {}
};

class NonFiniteData : public Error {
public:
  explicit NonFiniteData(const std::string& msg) : Error(msg) {}
};

class IoError : public Error {
public:
  explicit IoError(const std::string& msg) : Error(msg) {}
};

// ----------------------------------------------------------------------
// Block structure
// ----------------------------------------------------------------------

/// Assignment of dictionary atoms to blocks. Labels are arbitrary
/// non-negative integers (not required to be contiguous), so merges can
/// relabel without compaction; no block may exceed max_block_size atoms.
class BlockStructure {
public:
  BlockStructure(std::vector<int> labels, int max_block_size)
      : labels_(std::move(labels)), max_block_size_(max_block_size) {
    if (labels_.empty())
      throw DimensionMismatch("block structure needs at least one atom");
    if (max_block_size_ < 1)
      throw InfeasibleConfig("max block size must be >= 1");
    std::map<int, int> counts;
    for (int lab : labels_) {
      if (lab < 0)
        throw SizeMismatch("block labels must be non-negative");
      ++counts[lab];
    }
    for (const auto& [lab, n] : counts) {
      if (n > max_block_size_)
        throw SizeMismatch("block " + std::to_string(lab) + " has " +
                           std::to_string(n) + " atoms, exceeds max size " +
                           std::to_string(max_block_size_));
    }
  }

  /// d = [0, 1, ..., K-1]: every atom its own block.
  static BlockStructure singleton(int atom_count, int max_block_size = 1) {
    std::vector<int> labels(static_cast<std::size_t>(atom_count));
    for (int i = 0; i < atom_count; ++i) labels[static_cast<std::size_t>(i)] = i;
    return BlockStructure(std::move(labels), max_block_size);
  }

  int atom_count() const { return static_cast<int>(labels_.size()); }
  int max_block_size() const { return max_block_size_; }
  const std::vector<int>& labels() const { return labels_; }
  int label_of(int atom) const { return labels_[static_cast<std::size_t>(atom)]; }

  /// Nonempty blocks in ascending label order, each with its sorted atom
  /// indices. The lists partition {0..K-1}.
  std::vector<std::pair<int, std::vector<int>>> block_lists() const {
    std::map<int, std::vector<int>> by_label;
    for (int i = 0; i < atom_count(); ++i)
      by_label[labels_[static_cast<std::size_t>(i)]].push_back(i);
    std::vector<std::pair<int, std::vector<int>>> out;
    out.reserve(by_label.size());
    for (auto& [lab, atoms] : by_label) out.emplace_back(lab, std::move(atoms));
    return out;
  }

  int block_count() const {
    std::vector<int> sorted = labels_;
    std::sort(sorted.begin(), sorted.end());
    return static_cast<int>(std::unique(sorted.begin(), sorted.end()) - sorted.begin());
  }

  /// Renumbers labels to 0,1,2,... in order of first appearance. Atoms and
  /// the partition are unchanged; only label names move.
  BlockStructure canonicalized() const {
    std::map<int, int> remap;
    std::vector<int> out(labels_.size());
    int next = 0;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
      auto it = remap.find(labels_[i]);
      if (it == remap.end()) it = remap.emplace(labels_[i], next++).first;
      out[i] = it->second;
    }
    return BlockStructure(std::move(out), max_block_size_);
  }

  bool operator==(const BlockStructure& other) const {
    return labels_ == other.labels_ && max_block_size_ == other.max_block_size_;
  }

private:
  std::vector<int> labels_;
  int max_block_size_;
};

// ----------------------------------------------------------------------
// Core operations
// ----------------------------------------------------------------------

/// Rescales every column to unit l2-norm. Throws ZeroColumn if a column
/// norm falls below 1e-12.
inline Matrix normalize_columns(const Matrix& m) {
  Matrix out = m;
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    const double norm = out.col(j).norm();
    if (norm < 1e-12) throw ZeroColumn(static_cast<int>(j));
    out.col(j) /= norm;
  }
  return out;
}

/// Number of blocks of d holding any coefficient with |value| > tol.
/// The default tol 0 counts structural (stored) zeros only; pass a small
/// tolerance for externally loaded coefficients.
inline int block_sparsity(const Vector& theta, const BlockStructure& d,
                          double tol = 0.0) {
  if (theta.size() != d.atom_count())
    throw DimensionMismatch("coefficient vector length " +
                            std::to_string(theta.size()) +
                            " does not match atom count " +
                            std::to_string(d.atom_count()));
  std::vector<int> active;
  for (int i = 0; i < d.atom_count(); ++i) {
    if (std::abs(theta[i]) > tol) active.push_back(d.label_of(i));
  }
  std::sort(active.begin(), active.end());
  return static_cast<int>(std::unique(active.begin(), active.end()) - active.begin());
}

inline void check_finite(const Matrix& m, const char* what) {
  if (!m.allFinite())
    throw NonFiniteData(std::string(what) + " contains NaN or Inf entries");
}

inline void check_signal_matrix(const Matrix& x) {
  if (x.rows() < 1 || x.cols() < 1)
    throw DimensionMismatch("signal matrix must be at least 1x1");
  check_finite(x, "signal matrix");
}

inline void check_dictionary(const Matrix& d, double tol = 1e-10) {
  if (d.rows() < 1 || d.cols() < 1)
    throw DimensionMismatch("dictionary must be at least 1x1");
  check_finite(d, "dictionary");
  for (Eigen::Index j = 0; j < d.cols(); ++j) {
    if (std::abs(d.col(j).norm() - 1.0) > tol)
      throw Error("dictionary column " + std::to_string(j) +
                  " is not unit-norm");
  }
}

}  // namespace bsdl
