#include "dsmreg/shifted_solver.hpp"

#include <cmath>

namespace dsmreg {

ShiftedCholesky::ShiftedCholesky(const Eigen::MatrixXd& matrix, double shift) : shift_(shift) {
  if (!(shift > 0.0) || !std::isfinite(shift)) {
    throw std::invalid_argument("solve_shifted: shift must be positive and finite");
  }
  if (matrix.rows() != matrix.cols()) throw std::invalid_argument("solve_shifted: matrix is not square");

  const Eigen::Index n = matrix.rows();
  factor_ = Eigen::MatrixXd::Zero(n, n);
  // Column-oriented (left-looking) Cholesky on the lower triangle.
  for (Eigen::Index j = 0; j < n; ++j) {
    double diag = matrix(j, j) + shift;
    for (Eigen::Index k = 0; k < j; ++k) diag -= factor_(j, k) * factor_(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) throw FactorizationError(j, diag);
    const double ljj = std::sqrt(diag);
    factor_(j, j) = ljj;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double v = matrix(i, j);
      for (Eigen::Index k = 0; k < j; ++k) v -= factor_(i, k) * factor_(j, k);
      factor_(i, j) = v / ljj;
    }
  }
}

Eigen::VectorXd ShiftedCholesky::solve(const Eigen::VectorXd& rhs) const {
  const Eigen::Index n = factor_.rows();
  if (rhs.size() != n) {
    throw std::invalid_argument("solve_shifted: dimension mismatch (" + std::to_string(rhs.size()) + " vs " +
                                std::to_string(n) + ")");
  }
  Eigen::VectorXd y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double v = rhs[i];
    for (Eigen::Index k = 0; k < i; ++k) v -= factor_(i, k) * y[k];
    y[i] = v / factor_(i, i);
  }
  Eigen::VectorXd x(n);
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    double v = y[i];
    for (Eigen::Index k = i + 1; k < n; ++k) v -= factor_(k, i) * x[k];
    x[i] = v / factor_(i, i);
  }
  return x;
}

Eigen::VectorXd solve_shifted(const Eigen::MatrixXd& matrix, double shift, const Eigen::VectorXd& rhs) {
  if (rhs.size() != matrix.rows()) {
    throw std::invalid_argument("solve_shifted: dimension mismatch (" + std::to_string(rhs.size()) + " vs " +
                                std::to_string(matrix.rows()) + ")");
  }
  return ShiftedCholesky(matrix, shift).solve(rhs);
}

double relative_residual(const Eigen::MatrixXd& matrix, double shift, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs) {
  const double xn = x.norm();
  if (xn == 0.0) return rhs.norm();
  const Eigen::VectorXd r = matrix * x + shift * x - rhs;
  return r.norm() / ((shift + matrix.norm()) * xn);
}

}  // namespace dsmreg
