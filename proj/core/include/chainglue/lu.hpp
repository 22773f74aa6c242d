#ifndef CHAINGLUE_LU_HPP
#define CHAINGLUE_LU_HPP

#include <Eigen/Dense>

#include "chainglue/core.hpp"

namespace chainglue {

/// One partially pivoted LU factorization reused for any number of
/// right-hand sides. Throws SingularSystem when a pivot is numerically zero
/// relative to n * eps * ||A||_inf.
class DenseLu {
 public:
  explicit DenseLu(const Matrix& a);

  Vector solve(const Vector& rhs) const;
  /// Column-batched solve; every column is independent of the others.
  Matrix solve(const Matrix& rhs) const;

  Index size() const { return n_; }
  /// Smallest over largest absolute pivot.
  double pivot_ratio() const { return pivot_ratio_; }

 private:
  Index n_ = 0;
  Eigen::PartialPivLU<Matrix> lu_;
  double pivot_ratio_ = 0.0;
};

}  // namespace chainglue

#endif  // CHAINGLUE_LU_HPP
