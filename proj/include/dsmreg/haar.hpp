#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>

#include <Eigen/Core>

#include "dsmreg/sampling.hpp"

namespace dsmreg {

/// Index j >= 1 of an orthonormal Haar function on [0,1].
///
/// j = 1 is the constant. For j >= 2, j = 2^{l-1} + p with level l >= 1 and
/// offset 1 <= p <= 2^{l-1}; the support is [(p-1)/2^{l-1}, p/2^{l-1}).
class HaarIndex {
 public:
  explicit HaarIndex(int j);
  static HaarIndex from_level_offset(int l, int p);

  int j() const { return j_; }
  int level() const;   // 0 for the constant
  int offset() const;  // 0 for the constant
  double amplitude() const;

  struct Piece {
    double lo;
    double hi;
    double value;
  };
  /// Constant pieces covering the support (one for j = 1, two otherwise).
  int pieces(std::array<Piece, 2>& out) const;

 private:
  int j_;
};

/// Phi_j(x) for x in [0,1]; right-open cells, x = 1 by left limit.
double haar_eval(HaarIndex j, double x);

/// int_a^b e^{-ct} dt, stable for small c*(b-a).
double exp_integral(double c, double a, double b);
/// int_a^b t e^{-ct} dt, stable for small c*(b-a).
double texp_integral(double c, double a, double b);

/// <e^{-c.}, Phi_j> on [0,1].
double exp_haar_inner(double c, HaarIndex j);
/// <t e^{-ct}, Phi_j> on [0,1].
double texp_haar_inner(double c, HaarIndex j);

/// Coefficients in the basis Phi_1..Phi_{2^level} of the space L_level.
struct HaarCoefficients {
  int level = 0;
  Eigen::VectorXd values;

  static HaarCoefficients zeros(int m);
  std::size_t size() const { return static_cast<std::size_t>(values.size()); }

  /// Exact embedding into L_m for m >= level (zero padding).
  HaarCoefficients embedded(int m) const;

  /// Point value of the represented function, O(level).
  double evaluate(double x) const;
};

/// Dimension 2^m of L_m; throws for m outside [0, 30].
std::size_t haar_dimension(int m);

/// Haar coefficients from the integrals of f over the 2^m dyadic cells of level m.
/// Exact: every Phi_j with j <= 2^m is constant on those cells.
Eigen::VectorXd haar_analysis(std::span<const double> cell_integrals);

/// <f, Phi_j>, j = 1..2^m, with 4-point Gauss-Legendre on each level-m cell.
HaarCoefficients project(const std::function<double(double)>& f, int m);

/// <f, Phi_j> from node samples. Requires at least 8 grid cells per level-m cell
/// and a grid that refines the level-m dyadic grid.
HaarCoefficients project(const SampledFunction& samples, int m);

inline constexpr std::size_t kMinSamplesPerHaarCell = 8;

}  // namespace dsmreg
