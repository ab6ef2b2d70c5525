#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "specseq/integer.hpp"

namespace specseq {

enum class SmithTransforms {
  None,          ///< only D
  Forward,       ///< D, U, V
  WithInverses,  ///< D, U, V, U^-1, V^-1
};

/// Result of U * M * V = D with U, V unimodular and D diagonal,
/// d_0 | d_1 | ... and every d_i >= 0.
template <typename Scalar>
struct SmithDecomposition {
  Matrix<Scalar> U, D, V;
  Matrix<Scalar> U_inv, V_inv;
  Index rank = 0;

  /// The nonzero diagonal entries d_0 | d_1 | ... | d_{rank-1}.
  std::vector<Scalar> invariant_factors() const {
    std::vector<Scalar> out;
    out.reserve(static_cast<std::size_t>(rank));
    for (Index i = 0; i < rank; ++i) out.push_back(D(i, i));
    return out;
  }
};

namespace detail {

template <typename Scalar>
Scalar abs_value(const Scalar& x) {
  return x < 0 ? Scalar(-x) : x;
}

template <typename Scalar>
class SmithWorker {
 public:
  SmithWorker(Matrix<Scalar> m, SmithTransforms t) : d_(std::move(m)), mode_(t) {
    if (mode_ != SmithTransforms::None) {
      u_ = Matrix<Scalar>::Identity(d_.rows(), d_.rows());
      v_ = Matrix<Scalar>::Identity(d_.cols(), d_.cols());
    }
    if (mode_ == SmithTransforms::WithInverses) {
      u_inv_ = Matrix<Scalar>::Identity(d_.rows(), d_.rows());
      v_inv_ = Matrix<Scalar>::Identity(d_.cols(), d_.cols());
    }
  }

  SmithDecomposition<Scalar> run() {
    const Index steps = std::min(d_.rows(), d_.cols());
    Index t = 0;
    for (; t < steps; ++t) {
      Index pi, pj;
      if (!smallest_nonzero(t, pi, pj)) break;
      swap_rows(t, pi);
      swap_cols(t, pj);
      reduce_pivot(t);
      if (d_(t, t) < 0) negate_row(t);
    }
    SmithDecomposition<Scalar> out;
    out.rank = t;
    out.D = std::move(d_);
    out.U = std::move(u_);
    out.V = std::move(v_);
    out.U_inv = std::move(u_inv_);
    out.V_inv = std::move(v_inv_);
    return out;
  }

 private:
  // Minimal-magnitude pivot keeps coefficient growth in check.
  bool smallest_nonzero(Index t, Index& pi, Index& pj) const {
    bool found = false;
    Scalar best{};
    for (Index j = t; j < d_.cols(); ++j) {
      for (Index i = t; i < d_.rows(); ++i) {
        if (d_(i, j) == 0) continue;
        Scalar a = abs_value<Scalar>(d_(i, j));
        if (!found || a < best) {
          best = a;
          pi = i;
          pj = j;
          found = true;
          if (best == 1) return true;
        }
      }
    }
    return found;
  }

  void reduce_pivot(Index t) {
    for (;;) {
      bool clean = true;
      for (Index i = t + 1; i < d_.rows(); ++i) {
        if (d_(i, t) == 0) continue;
        Scalar q = d_(i, t) / d_(t, t);
        if (q != 0) add_row(i, t, Scalar(-q));
        if (d_(i, t) != 0) clean = false;
      }
      for (Index j = t + 1; j < d_.cols(); ++j) {
        if (d_(t, j) == 0) continue;
        Scalar q = d_(t, j) / d_(t, t);
        if (q != 0) add_col(j, t, Scalar(-q));
        if (d_(t, j) != 0) clean = false;
      }
      if (!clean) {
        // Some remainder is now smaller than the pivot; promote it.
        Index best_i = t, best_j = t;
        Scalar best = abs_value<Scalar>(d_(t, t));
        for (Index i = t + 1; i < d_.rows(); ++i) {
          if (d_(i, t) != 0 && abs_value<Scalar>(d_(i, t)) < best) {
            best = abs_value<Scalar>(d_(i, t));
            best_i = i;
            best_j = t;
          }
        }
        for (Index j = t + 1; j < d_.cols(); ++j) {
          if (d_(t, j) != 0 && abs_value<Scalar>(d_(t, j)) < best) {
            best = abs_value<Scalar>(d_(t, j));
            best_i = t;
            best_j = j;
          }
        }
        swap_rows(t, best_i);
        swap_cols(t, best_j);
        continue;
      }
      // Row and column are clear; enforce divisibility of the trailing block.
      bool divisible = true;
      for (Index j = t + 1; j < d_.cols() && divisible; ++j) {
        for (Index i = t + 1; i < d_.rows(); ++i) {
          if (d_(i, j) % d_(t, t) != 0) {
            add_row(t, i, Scalar(1));
            divisible = false;
            break;
          }
        }
      }
      if (divisible) return;
    }
  }

  // row_i += c * row_j
  void add_row(Index i, Index j, const Scalar& c) {
    for (Index k = 0; k < d_.cols(); ++k)
      if (d_(j, k) != 0) d_(i, k) += c * d_(j, k);
    if (mode_ == SmithTransforms::None) return;
    for (Index k = 0; k < u_.cols(); ++k)
      if (u_(j, k) != 0) u_(i, k) += c * u_(j, k);
    if (mode_ == SmithTransforms::WithInverses)
      for (Index k = 0; k < u_inv_.rows(); ++k)
        if (u_inv_(k, i) != 0) u_inv_(k, j) -= c * u_inv_(k, i);
  }

  // col_j += c * col_i
  void add_col(Index j, Index i, const Scalar& c) {
    for (Index k = 0; k < d_.rows(); ++k)
      if (d_(k, i) != 0) d_(k, j) += c * d_(k, i);
    if (mode_ == SmithTransforms::None) return;
    for (Index k = 0; k < v_.rows(); ++k)
      if (v_(k, i) != 0) v_(k, j) += c * v_(k, i);
    if (mode_ == SmithTransforms::WithInverses)
      for (Index k = 0; k < v_inv_.cols(); ++k)
        if (v_inv_(j, k) != 0) v_inv_(i, k) -= c * v_inv_(j, k);
  }

  void swap_rows(Index a, Index b) {
    if (a == b) return;
    d_.row(a).swap(d_.row(b));
    if (mode_ == SmithTransforms::None) return;
    u_.row(a).swap(u_.row(b));
    if (mode_ == SmithTransforms::WithInverses) u_inv_.col(a).swap(u_inv_.col(b));
  }

  void swap_cols(Index a, Index b) {
    if (a == b) return;
    d_.col(a).swap(d_.col(b));
    if (mode_ == SmithTransforms::None) return;
    v_.col(a).swap(v_.col(b));
    if (mode_ == SmithTransforms::WithInverses) v_inv_.row(a).swap(v_inv_.row(b));
  }

  void negate_row(Index t) {
    for (Index k = 0; k < d_.cols(); ++k) d_(t, k) = -d_(t, k);
    if (mode_ == SmithTransforms::None) return;
    for (Index k = 0; k < u_.cols(); ++k) u_(t, k) = -u_(t, k);
    if (mode_ == SmithTransforms::WithInverses)
      for (Index k = 0; k < u_inv_.rows(); ++k) u_inv_(k, t) = -u_inv_(k, t);
  }

  Matrix<Scalar> d_, u_, v_, u_inv_, v_inv_;
  SmithTransforms mode_;
};

}  // namespace detail

/// Smith normal form of an integer matrix over any exact integral scalar
/// (long, __int128, Integer). Empty matrices yield identity transforms.
template <typename Derived>
SmithDecomposition<typename Derived::Scalar> smith_normal_form(
    const Eigen::MatrixBase<Derived>& m, SmithTransforms transforms = SmithTransforms::Forward) {
  using Scalar = typename Derived::Scalar;
  return detail::SmithWorker<Scalar>(Matrix<Scalar>(m), transforms).run();
}

/// Rank over Q, read off the Smith form.
template <typename Derived>
Index integer_rank(const Eigen::MatrixBase<Derived>& m) {
  return smith_normal_form(m, SmithTransforms::None).rank;
}

}  // namespace specseq
