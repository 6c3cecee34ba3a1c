#ifndef UOS_MODELS_HPP
#define UOS_MODELS_HPP

#include <Eigen/SVD>

#include <algorithm>
#include <memory>
#include <numeric>
#include <string>
#include <vector>

#include "uos/core.hpp"

namespace uos {

namespace detail {

/// Indices of the K largest energies; equal energies keep the lower index.
inline std::vector<Index> select_top_k(const std::vector<double>& energy, Index k) {
  std::vector<Index> idx(energy.size());
  std::iota(idx.begin(), idx.end(), Index(0));
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return energy[static_cast<std::size_t>(a)] >
                                                  energy[static_cast<std::size_t>(b)]; });
  idx.resize(static_cast<std::size_t>(k));
  std::sort(idx.begin(), idx.end());
  return idx;
}

/// Uniform k-subset of {0..n-1}, returned sorted.
inline std::vector<Index> sample_subset(Index n, Index k, std::mt19937_64& rng) {
  std::vector<Index> all(static_cast<std::size_t>(n));
  std::iota(all.begin(), all.end(), Index(0));
  std::vector<Index> out;
  out.reserve(static_cast<std::size_t>(k));
  std::sample(all.begin(), all.end(), std::back_inserter(out), k, rng);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

/// Keep the K entries of largest magnitude, zero the rest.
/// Ties are broken toward the lowest index.
template <class Scalar>
Vector<Scalar> project_k_sparse(const Vector<Scalar>& x, Index k) {
  const Index n = x.size();
  require(k >= 0 && k <= n, "project_k_sparse: need 0 <= K <= N");
  if (k == n) return x;
  Vector<Scalar> out = Vector<Scalar>::Zero(n);
  if (k == 0) return out;
  std::vector<double> energy(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) energy[static_cast<std::size_t>(i)] = std::norm(x[i]);
  for (Index i : detail::select_top_k(energy, k)) out[i] = x[i];
  return out;
}

/// Keep the K blocks of largest l2 energy intact, zero the rest.
template <class Scalar>
Vector<Scalar> project_block_sparse(const Vector<Scalar>& x,
                                    const std::vector<std::vector<Index>>& blocks, Index k) {
  require(k >= 0 && k <= static_cast<Index>(blocks.size()),
          "project_block_sparse: need 0 <= K <= number of blocks");
  if (k == static_cast<Index>(blocks.size())) return x;
  Vector<Scalar> out = Vector<Scalar>::Zero(x.size());
  if (k == 0) return out;
  std::vector<double> energy(blocks.size(), 0.0);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (Index i : blocks[b]) {
      if (i < 0 || i >= x.size()) throw DimensionError("project_block_sparse: block index out of range");
      energy[b] += std::norm(x[i]);
    }
  for (Index b : detail::select_top_k(energy, k))
    for (Index i : blocks[static_cast<std::size_t>(b)]) out[i] = x[i];
  return out;
}

/// Best Frobenius rank-<=r approximation (truncated SVD, Eckart-Young).
template <class Scalar>
Matrix<Scalar> project_low_rank(const Matrix<Scalar>& x, Index r) {
  const Index rmax = std::min(x.rows(), x.cols());
  require(r >= 0 && r <= rmax, "project_low_rank: need 0 <= r <= min(m,n)");
  if (r == rmax) return x;
  if (r == 0) return Matrix<Scalar>::Zero(x.rows(), x.cols());
  Eigen::JacobiSVD<Matrix<Scalar>> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU().leftCols(r) *
         svd.singularValues().head(r).template cast<Scalar>().asDiagonal() *
         svd.matrixV().leftCols(r).adjoint();
}

/// Keep the K rows of largest l2 energy, zero the rest (joint row sparsity).
template <class Scalar>
Matrix<Scalar> project_multiband(const Matrix<Scalar>& x, Index k) {
  const Index n = x.rows();
  require(k >= 0 && k <= n, "project_multiband: need 0 <= K <= number of rows");
  if (k == n) return x;
  Matrix<Scalar> out = Matrix<Scalar>::Zero(x.rows(), x.cols());
  if (k == 0) return out;
  std::vector<double> energy(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) energy[static_cast<std::size_t>(i)] = x.row(i).squaredNorm();
  for (Index i : detail::select_top_k(energy, k)) out.row(i) = x.row(i);
  return out;
}

/// A union-of-subspaces constraint set exposing the proximal projection.
/// Handles are immutable; projections and sampling are pure given their inputs.
template <class Scalar>
class UnionModel {
 public:
  virtual ~UnionModel() = default;

  virtual Index dimension() const = 0;  // ambient coordinate count
  virtual Index order() const = 0;      // K, block count K, rank r, or active rows K
  virtual Vector<Scalar> project(const Vector<Scalar>& x) const = 0;
  virtual bool contains(const Vector<Scalar>& x, double rel_tol = 1e-9) const = 0;
  /// Uniformly random member with the given norm: random support of exactly
  /// the model order, standard normal values on the active part, rescaled.
  virtual Vector<Scalar> sample(std::mt19937_64& rng, double norm) const = 0;
  virtual std::string describe() const = 0;
};

template <class Scalar>
class KSparseModel final : public UnionModel<Scalar> {
 public:
  KSparseModel(Index n, Index k) : n_(n), k_(k) {
    require(n >= 1, "KSparseModel: N >= 1");
    require(k >= 0 && k <= n, "KSparseModel: need 0 <= K <= N");
  }

  Index dimension() const override { return n_; }
  Index order() const override { return k_; }
  Index sparsity() const { return k_; }

  Vector<Scalar> project(const Vector<Scalar>& x) const override {
    if (x.size() != n_) throw DimensionError("KSparseModel::project");
    return project_k_sparse(x, k_);
  }

  bool contains(const Vector<Scalar>& x, double /*rel_tol*/ = 1e-9) const override {
    if (x.size() != n_) return false;
    Index nnz = 0;
    for (Index i = 0; i < n_; ++i)
      if (x[i] != Scalar(0)) ++nnz;
    return nnz <= k_;
  }

  Vector<Scalar> sample(std::mt19937_64& rng, double norm) const override {
    require(norm > 0.0, "sample: norm must be > 0");
    Vector<Scalar> v = Vector<Scalar>::Zero(n_);
    for (;;) {
      for (Index i : detail::sample_subset(n_, k_, rng)) v[i] = draw_standard_normal<Scalar>(rng);
      const double vn = v.norm();
      if (vn > 0.0) return v * (norm / vn);
      v.setZero();  // all-zero draw; retry
    }
  }

  std::string describe() const override {
    return "k-sparse(N=" + std::to_string(n_) + ",K=" + std::to_string(k_) + ")";
  }

 private:
  Index n_, k_;
};

template <class Scalar>
class BlockSparseModel final : public UnionModel<Scalar> {
 public:
  BlockSparseModel(std::vector<std::vector<Index>> blocks, Index k)
      : blocks_(std::move(blocks)), k_(k) {
    require(!blocks_.empty(), "BlockSparseModel: need at least one block");
    require(k >= 0 && k <= static_cast<Index>(blocks_.size()),
            "BlockSparseModel: need 0 <= K <= number of blocks");
    std::vector<Index> all;
    for (const auto& b : blocks_) {
      require(!b.empty(), "BlockSparseModel: empty block");
      all.insert(all.end(), b.begin(), b.end());
    }
    std::sort(all.begin(), all.end());
    n_ = static_cast<Index>(all.size());
    for (Index i = 0; i < n_; ++i)
      if (all[static_cast<std::size_t>(i)] != i)
        throw ParameterError("BlockSparseModel: blocks must partition 0..N-1 disjointly");
  }

  /// Contiguous equal-size blocks covering 0..n-1.
  static BlockSparseModel uniform(Index n, Index block_size, Index k) {
    require(block_size >= 1 && n % block_size == 0,
            "BlockSparseModel::uniform: N must be divisible by block size");
    std::vector<std::vector<Index>> blocks;
    for (Index s = 0; s < n; s += block_size) {
      std::vector<Index> b(static_cast<std::size_t>(block_size));
      std::iota(b.begin(), b.end(), s);
      blocks.push_back(std::move(b));
    }
    return BlockSparseModel(std::move(blocks), k);
  }

  Index dimension() const override { return n_; }
  Index order() const override { return k_; }
  const std::vector<std::vector<Index>>& blocks() const { return blocks_; }

  Vector<Scalar> project(const Vector<Scalar>& x) const override {
    if (x.size() != n_) throw DimensionError("BlockSparseModel::project");
    return project_block_sparse(x, blocks_, k_);
  }

  bool contains(const Vector<Scalar>& x, double /*rel_tol*/ = 1e-9) const override {
    if (x.size() != n_) return false;
    Index active = 0;
    for (const auto& b : blocks_) {
      bool any = false;
      for (Index i : b) any = any || (x[i] != Scalar(0));
      active += any;
    }
    return active <= k_;
  }

  Vector<Scalar> sample(std::mt19937_64& rng, double norm) const override {
    require(norm > 0.0, "sample: norm must be > 0");
    Vector<Scalar> v = Vector<Scalar>::Zero(n_);
    for (;;) {
      for (Index b : detail::sample_subset(static_cast<Index>(blocks_.size()), k_, rng))
        for (Index i : blocks_[static_cast<std::size_t>(b)])
          v[i] = draw_standard_normal<Scalar>(rng);
      const double vn = v.norm();
      if (vn > 0.0) return v * (norm / vn);
      v.setZero();
    }
  }

  std::string describe() const override {
    return "block-sparse(N=" + std::to_string(n_) + ",blocks=" + std::to_string(blocks_.size()) +
           ",K=" + std::to_string(k_) + ")";
  }

 private:
  std::vector<std::vector<Index>> blocks_;
  Index k_;
  Index n_ = 0;
};

/// Rank-constrained m x n matrices, stored as column-major vectorizations.
template <class Scalar>
class LowRankModel final : public UnionModel<Scalar> {
 public:
  LowRankModel(Index m, Index n, Index r) : m_(m), n_(n), r_(r) {
    require(m >= 1 && n >= 1, "LowRankModel: m,n >= 1");
    require(r >= 0 && r <= std::min(m, n), "LowRankModel: need 0 <= r <= min(m,n)");
  }

  Index dimension() const override { return m_ * n_; }
  Index order() const override { return r_; }
  Index matrix_rows() const { return m_; }
  Index matrix_cols() const { return n_; }

  Vector<Scalar> project(const Vector<Scalar>& x) const override {
    if (x.size() != m_ * n_) throw DimensionError("LowRankModel::project");
    return vec<Scalar>(project_low_rank(unvec(x, m_, n_), r_));
  }

  bool contains(const Vector<Scalar>& x, double rel_tol = 1e-9) const override {
    if (x.size() != m_ * n_) return false;
    if (r_ == std::min(m_, n_)) return true;
    Eigen::JacobiSVD<Matrix<Scalar>> svd(unvec(x, m_, n_));
    const auto& s = svd.singularValues();
    if (s[0] == 0.0) return true;
    return s[r_] <= rel_tol * s[0];
  }

  Vector<Scalar> sample(std::mt19937_64& rng, double norm) const override {
    require(norm > 0.0, "sample: norm must be > 0");
    if (r_ == 0) throw ParameterError("LowRankModel::sample: rank 0 has only the zero matrix");
    for (;;) {
      Matrix<Scalar> a(m_, r_), b(r_, n_);
      for (Index i = 0; i < m_; ++i)
        for (Index j = 0; j < r_; ++j) a(i, j) = draw_standard_normal<Scalar>(rng);
      for (Index i = 0; i < r_; ++i)
        for (Index j = 0; j < n_; ++j) b(i, j) = draw_standard_normal<Scalar>(rng);
      Matrix<Scalar> x = a * b;
      const double xn = x.norm();
      if (xn > 0.0) return vec<Scalar>(Matrix<Scalar>(x * (norm / xn)));
    }
  }

  std::string describe() const override {
    return "low-rank(" + std::to_string(m_) + "x" + std::to_string(n_) +
           ",r=" + std::to_string(r_) + ")";
  }

 private:
  Index m_, n_, r_;
};

/// Discretized multiband model: N frequency blocks, each a row of F grid
/// samples; at most K jointly active rows.  Vectorization is column-major,
/// so consecutive entries at a fixed grid index form the stacked vector x(f).
template <class Scalar>
class MultibandModel final : public UnionModel<Scalar> {
 public:
  MultibandModel(Index bands, Index grid, Index k) : bands_(bands), grid_(grid), k_(k) {
    require(bands >= 1 && grid >= 1, "MultibandModel: bands, grid >= 1");
    require(k >= 0 && k <= bands, "MultibandModel: need 0 <= K <= bands");
  }

  Index dimension() const override { return bands_ * grid_; }
  Index order() const override { return k_; }
  Index bands() const { return bands_; }
  Index grid() const { return grid_; }

  Matrix<Scalar> to_blocks(const Vector<Scalar>& x) const {
    if (x.size() != bands_ * grid_) throw DimensionError("MultibandModel::to_blocks");
    return unvec(x, bands_, grid_);
  }

  Vector<Scalar> project(const Vector<Scalar>& x) const override {
    return vec<Scalar>(project_multiband(to_blocks(x), k_));
  }

  bool contains(const Vector<Scalar>& x, double /*rel_tol*/ = 1e-9) const override {
    if (x.size() != bands_ * grid_) return false;
    const Matrix<Scalar> blocks = unvec(x, bands_, grid_);
    Index active = 0;
    for (Index i = 0; i < bands_; ++i) active += blocks.row(i).squaredNorm() > 0.0;
    return active <= k_;
  }

  Vector<Scalar> sample(std::mt19937_64& rng, double norm) const override {
    require(norm > 0.0, "sample: norm must be > 0");
    Matrix<Scalar> blocks = Matrix<Scalar>::Zero(bands_, grid_);
    for (;;) {
      for (Index i : detail::sample_subset(bands_, k_, rng))
        for (Index f = 0; f < grid_; ++f) blocks(i, f) = draw_standard_normal<Scalar>(rng);
      const double bn = blocks.norm();
      if (bn > 0.0) return vec<Scalar>(Matrix<Scalar>(blocks * (norm / bn)));
      blocks.setZero();
    }
  }

  std::string describe() const override {
    return "multiband(bands=" + std::to_string(bands_) + ",grid=" + std::to_string(grid_) +
           ",K=" + std::to_string(k_) + ")";
  }

 private:
  Index bands_, grid_, k_;
};

template <class Scalar>
Vector<Scalar> sample_from_model(const UnionModel<Scalar>& model, std::uint64_t seed,
                                 double norm) {
  std::mt19937_64 rng(seed);
  return model.sample(rng, norm);
}

}  // namespace uos

#endif  // UOS_MODELS_HPP
