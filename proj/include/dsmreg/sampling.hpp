#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace dsmreg {

/// Values of a function on the uniform node grid x_k = k/N, k = 0..N, of [0,1].
///
/// Integrals over grid cells use the trapezoid rule, i.e. they are exact for the
/// piecewise-linear interpolant of the samples.
class SampledFunction {
 public:
  SampledFunction() = default;
  explicit SampledFunction(std::vector<double> values);

  static SampledFunction sample(const std::function<double(double)>& f, std::size_t cells);

  std::size_t cells() const { return values_.size() - 1; }
  double spacing() const { return 1.0 / static_cast<double>(cells()); }
  double node(std::size_t k) const { return static_cast<double>(k) / static_cast<double>(cells()); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t k) const { return values_[k]; }

  /// Discrete L2 norm with trapezoid weights.
  double l2_norm() const;

  /// Integral over each of `coarse` equal cells. `coarse` must divide cells().
  std::vector<double> cell_integrals(std::size_t coarse) const;

  /// Zeroth and first moments over each of `coarse` equal cells [c_j, c_{j+1}):
  /// I0_j = int f ds, I1_j = int (s - c_j) f ds, both by the trapezoid rule on the samples.
  void cell_moments(std::size_t coarse, std::vector<double>& zeroth, std::vector<double>& first) const;

  SampledFunction operator+(const SampledFunction& other) const;
  SampledFunction operator-(const SampledFunction& other) const;

 private:
  std::vector<double> values_;
};

}  // namespace dsmreg
