#include "chainglue/lu.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "chainglue/errors.hpp"

namespace chainglue {

DenseLu::DenseLu(const Matrix& a) : n_(a.rows()) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw SingularSystem("LU: matrix must be square and nonempty");
  }
  lu_.compute(a);
  const auto& packed = lu_.matrixLU();
  const Vector pivots = packed.diagonal().cwiseAbs();
  const double largest = pivots.maxCoeff();
  const double smallest = pivots.minCoeff();
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  const double tol = static_cast<double>(n_) * std::numeric_limits<double>::epsilon() * norm;
  if (!std::isfinite(smallest) || smallest <= tol) {
    throw SingularSystem("LU: zero pivot (|u| = " + std::to_string(smallest) +
                         ", tolerance " + std::to_string(tol) + ")");
  }
  pivot_ratio_ = smallest / largest;
}

Vector DenseLu::solve(const Vector& rhs) const { return lu_.solve(rhs); }

Matrix DenseLu::solve(const Matrix& rhs) const { return lu_.solve(rhs); }

}  // namespace chainglue
