#pragma once

#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace dsmreg {

/// Raised when aI + A is not numerically positive definite.
class FactorizationError : public std::runtime_error {
 public:
  FactorizationError(Eigen::Index pivot, double value)
      : std::runtime_error("Cholesky factorization failed at pivot " + std::to_string(pivot) +
                           " (value " + std::to_string(value) + ")"),
        pivot_(pivot),
        value_(value) {}

  Eigen::Index pivot() const { return pivot_; }
  double value() const { return value_; }

 private:
  Eigen::Index pivot_;
  double value_;
};

/// Dense Cholesky factor L L^T = aI + A of a shifted symmetric PSD matrix.
///
/// Only the lower triangle of A is read. The factor can be reused for several
/// right-hand sides (LAS1 and LAS2 share the matrix when the kernel is symmetric).
class ShiftedCholesky {
 public:
  ShiftedCholesky(const Eigen::MatrixXd& matrix, double shift);

  Eigen::VectorXd solve(const Eigen::VectorXd& rhs) const;

  double shift() const { return shift_; }
  Eigen::Index size() const { return factor_.rows(); }

 private:
  Eigen::MatrixXd factor_;
  double shift_;
};

/// x = (aI + A)^{-1} b.
Eigen::VectorXd solve_shifted(const Eigen::MatrixXd& matrix, double shift, const Eigen::VectorXd& rhs);

/// ||(aI + A) x - b|| / ((a + ||A||_F) ||x||), or 0 for x = 0.
double relative_residual(const Eigen::MatrixXd& matrix, double shift, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& rhs);

}  // namespace dsmreg
