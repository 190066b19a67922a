#pragma once

#include <cstddef>
#include <vector>

namespace dsmreg {

/// Compound Simpson rule on [0,1] with step 1/2^level.
///
/// Points are s_j = (j-1)/2^level for j = 1..2^level+1. The end weights are
/// (1/3)/2^level and interior weights alternate (4/3)/2^level, (2/3)/2^level.
struct QuadratureRule {
  int level = 0;
  std::vector<double> points;
  std::vector<double> weights;

  std::size_t size() const { return points.size(); }

  template <class F>
  double apply(F&& f) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < points.size(); ++j) sum += weights[j] * f(points[j]);
    return sum;
  }
};

/// Uniform partition of [0,1] into 180 * 2^level subintervals D_j = [d_{j-1}, d_j).
/// Used to build the first-order Taylor approximation of the adjoint.
struct TaylorPartition {
  int level = 0;
  std::vector<double> nodes;  // d_0 = 0, ..., d_N = 1

  std::size_t intervals() const { return nodes.size() - 1; }
  double width() const { return 1.0 / static_cast<double>(intervals()); }
};

inline constexpr int kTaylorCellsPerDyadic = 180;

/// Throws std::invalid_argument for m < 1.
QuadratureRule simpson_rule(int m);

/// Throws std::invalid_argument for m < 1.
TaylorPartition taylor_partition(int m);

/// Four-point Gauss-Legendre rule on [a,b].
template <class F>
double gauss_legendre4(F&& f, double a, double b) {
  constexpr double x0 = 0.33998104358485626;
  constexpr double x1 = 0.86113631159405258;
  constexpr double w0 = 0.65214515486254614;
  constexpr double w1 = 0.34785484513745386;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  return half * (w0 * (f(mid - half * x0) + f(mid + half * x0)) +
                 w1 * (f(mid - half * x1) + f(mid + half * x1)));
}

}  // namespace dsmreg
