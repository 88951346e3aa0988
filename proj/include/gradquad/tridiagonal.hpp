#pragma once

#include <Eigen/Core>
#include <cmath>
#include <string>
#include <vector>

#include "gradquad/errors.hpp"

namespace gradquad {

/// LU factorization of a tridiagonal matrix with partial pivoting
/// (row interchanges introduce one extra superdiagonal of fill-in).
/// Templated on the scalar so refinement passes can run in long double.
template <typename Scalar>
class TridiagonalLU {
public:
  using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  /// Bands indexed by row: sub[i] couples row i to column i-1 (sub[0]
  /// ignored), super[i] couples row i to column i+1 (super[n-1] ignored).
  TridiagonalLU(const Vec& sub, const Vec& diag, const Vec& super) {
    const Eigen::Index n = diag.size();
    if (sub.size() != n || super.size() != n)
      throw GridMismatchError("tridiagonal bands must have equal length");
    d_ = diag;
    dl_.resize(n > 0 ? n - 1 : 0);
    du_.resize(n > 0 ? n - 1 : 0);
    du2_ = Vec::Zero(n > 1 ? n - 2 : 0);
    swap_.assign(n > 0 ? n - 1 : 0, false);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      dl_[i] = sub[i + 1];
      du_[i] = super[i];
    }
    factor();
  }

  bool singular() const { return singular_; }

  /// Solves LU x = rhs. Throws SingularMatrixError on an exact zero pivot.
  Vec solve(Vec rhs) const {
    const Eigen::Index n = d_.size();
    if (rhs.size() != n) throw GridMismatchError("tridiagonal solve: rhs size mismatch");
    if (singular_)
      throw SingularMatrixError("tridiagonal factorization is singular (zero pivot at row " +
                                std::to_string(pivot_row_) + ")");
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (!swap_[i]) {
        rhs[i + 1] -= dl_[i] * rhs[i];
      } else {
        const Scalar tmp = rhs[i];
        rhs[i] = rhs[i + 1];
        rhs[i + 1] = tmp - dl_[i] * rhs[i];
      }
    }
    rhs[n - 1] /= d_[n - 1];
    if (n > 1) rhs[n - 2] = (rhs[n - 2] - du_[n - 2] * rhs[n - 1]) / d_[n - 2];
    for (Eigen::Index i = n - 3; i >= 0; --i)
      rhs[i] = (rhs[i] - du_[i] * rhs[i + 1] - du2_[i] * rhs[i + 2]) / d_[i];
    return rhs;
  }

private:
  void factor() {
    const Eigen::Index n = d_.size();
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
      if (std::abs(d_[i]) >= std::abs(dl_[i])) {
        if (d_[i] != Scalar(0)) {
          const Scalar fact = dl_[i] / d_[i];
          dl_[i] = fact;
          d_[i + 1] -= fact * du_[i];
        }
        if (i + 2 < n) du2_[i] = Scalar(0);
      } else {
        const Scalar fact = d_[i] / dl_[i];
        d_[i] = dl_[i];
        dl_[i] = fact;
        const Scalar tmp = du_[i];
        du_[i] = d_[i + 1];
        d_[i + 1] = tmp - fact * d_[i + 1];
        if (i + 2 < n) {
          du2_[i] = du_[i + 1];
          du_[i + 1] = -fact * du_[i + 1];
        }
        swap_[i] = true;
      }
    }
    for (Eigen::Index i = 0; i < n; ++i) {
      if (d_[i] == Scalar(0)) {
        singular_ = true;
        pivot_row_ = static_cast<int>(i);
        return;
      }
    }
  }

  Vec d_, dl_, du_, du2_;
  std::vector<bool> swap_;
  bool singular_ = false;
  int pivot_row_ = -1;
};

/// One-shot convenience wrapper.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tridiagonal_solve(
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& sub,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& diag,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& super,
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& rhs) {
  return TridiagonalLU<Scalar>(sub, diag, super).solve(rhs);
}

} // namespace gradquad
