#pragma once

#include <functional>
#include <map>
#include <memory>
#include <mutex>

#include <Eigen/Core>

#include "dsmreg/haar.hpp"
#include "dsmreg/quadrature.hpp"
#include "dsmreg/sampling.hpp"

namespace dsmreg {

/// Real kernel k(s,t) on [0,1]^2 of the operator (Ku)(s) = int k(s,t) u(t) dt.
struct Kernel {
  enum class Kind { exponential, generic };

  std::function<double(double, double)> eval;
  bool symmetric = false;
  double c1 = 0.0;         // Simpson error constant for T - T^(m)
  double sup_bound = 0.0;  // bound on |k| over the square
  Kind kind = Kind::generic;
};

/// k(s,t) = e^{-st}: symmetric, c1 = 16/180, sup |k| = 1.
Kernel exponential_kernel();

/// Checks c1 > 0, sup_bound against a sampled maximum, and symmetry when flagged.
/// Throws std::invalid_argument on violation.
void validate(const Kernel& kernel, int grid = 33);

/// Haar-coordinate matrix of T^(m) (domain side) or Q^(m) (range side).
struct GramMatrix {
  int level = 0;
  Eigen::MatrixXd entries;

  Eigen::Index size() const { return entries.rows(); }
};

enum class GramSide { domain, range };

/// (A_m)_{ij} = sum_l beta_l <k(s_l,.),Phi_i> <k(s_l,.),Phi_j>; the range side uses k(., s_l).
GramMatrix assemble_gram(const Kernel& kernel, int m, GramSide side = GramSide::domain);

/// v_i = <K_m^* f, Phi_i> for the first-order Taylor adjoint
///   K_m^* u(t) = sum_j int_{D_j} e^{-d_{j-1} t} [1 - t (s - d_{j-1})] u(s) ds.
/// The s-integrals use the trapezoid rule on the samples; the t-integrals are exact.
/// Only the exponential kernel is supported.
Eigen::VectorXd assemble_rhs(const Kernel& kernel, const TaylorPartition& partition, const SampledFunction& f,
                             int m);

/// g_i = <f, Phi_i>, i = 1..2^m.
Eigen::VectorXd data_coefficients(const SampledFunction& f, int m);

/// A-priori operator error bounds at level m.
struct ErrorBudget {
  int level = 0;
  double boundT = 0.0;      // ||T - T^(m)|| <= c1 / 2^{4m}
  double boundKstar = 0.0;  // ||K^* - K_m^*|| <= 1 / (2^{2m} 180)
  double boundMixed = 0.0;  // ||T^(m) - K_m^* K|| <= 17 / (2^{2m} 180)
};

ErrorBudget error_budget(const Kernel& kernel, int m);

/// Galerkin matrix of K itself, A_{ij} = <Phi_i, K Phi_j>, used by the fixed-level scheme.
GramMatrix assemble_galerkin(const Kernel& kernel, int m);

/// Thread-safe per-level memo of immutable Gram matrices for one kernel.
class GramCache {
 public:
  explicit GramCache(Kernel kernel) : kernel_(std::move(kernel)) {}

  std::shared_ptr<const GramMatrix> domain(int m) { return get(m, 0); }
  std::shared_ptr<const GramMatrix> range(int m) { return get(m, 1); }
  std::shared_ptr<const GramMatrix> galerkin(int m) { return get(m, 2); }
  /// A^T A and A A^T of the Galerkin matrix.
  std::shared_ptr<const GramMatrix> galerkin_normal(int m) { return get(m, 3); }
  std::shared_ptr<const GramMatrix> galerkin_normal_range(int m) { return get(m, 4); }
  const Kernel& kernel() const { return kernel_; }

 private:
  std::shared_ptr<const GramMatrix> get(int m, int which);

  Kernel kernel_;
  std::mutex mutex_;
  std::map<std::pair<int, int>, std::shared_ptr<const GramMatrix>> cache_;
};

}  // namespace dsmreg
