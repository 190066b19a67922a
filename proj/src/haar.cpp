#include "dsmreg/haar.hpp"

#include <bit>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "dsmreg/quadrature.hpp"

namespace dsmreg {

HaarIndex::HaarIndex(int j) : j_(j) {
  if (j < 1) throw std::invalid_argument("HaarIndex: j must be >= 1, got " + std::to_string(j));
}

HaarIndex HaarIndex::from_level_offset(int l, int p) {
  if (l < 1 || l > 30 || p < 1 || p > (1 << (l - 1))) {
    throw std::invalid_argument("HaarIndex: invalid (level, offset) = (" + std::to_string(l) + ", " +
                                std::to_string(p) + ")");
  }
  return HaarIndex((1 << (l - 1)) + p);
}

int HaarIndex::level() const {
  if (j_ == 1) return 0;
  return std::bit_width(static_cast<unsigned>(j_ - 1));
}

int HaarIndex::offset() const {
  if (j_ == 1) return 0;
  return j_ - (1 << (level() - 1));
}

double HaarIndex::amplitude() const {
  if (j_ == 1) return 1.0;
  return std::sqrt(std::ldexp(1.0, level() - 1));
}

int HaarIndex::pieces(std::array<Piece, 2>& out) const {
  if (j_ == 1) {
    out[0] = {0.0, 1.0, 1.0};
    return 1;
  }
  const double width = std::ldexp(1.0, -(level() - 1));
  const double lo = (offset() - 1) * width;
  const double amp = amplitude();
  out[0] = {lo, lo + 0.5 * width, amp};
  out[1] = {lo + 0.5 * width, lo + width, -amp};
  return 2;
}

double haar_eval(HaarIndex j, double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("haar_eval: x outside [0,1]");
  if (j.j() == 1) return 1.0;
  std::array<HaarIndex::Piece, 2> pc{};
  j.pieces(pc);
  if (x == 1.0) return pc[1].hi == 1.0 ? pc[1].value : 0.0;
  if (x >= pc[0].lo && x < pc[0].hi) return pc[0].value;
  if (x >= pc[1].lo && x < pc[1].hi) return pc[1].value;
  return 0.0;
}

namespace {

// (1 - e^{-x}) / x
double phi1(double x) {
  if (std::abs(x) < 1e-6) return 1.0 - x / 2.0 + x * x / 6.0 - x * x * x / 24.0;
  return -std::expm1(-x) / x;
}

// (1 - e^{-x}(1 + x)) / x^2 = sum_k (-x)^k / (k! (k+2))
double phi2(double x) {
  if (std::abs(x) < 1.0) {
    double term = 1.0;  // (-x)^k / k!
    double sum = 0.5;
    for (int k = 1; k < 30; ++k) {
      term *= -x / k;
      sum += term / (k + 2);
    }
    return sum;
  }
  return (1.0 - std::exp(-x) * (1.0 + x)) / (x * x);
}

}  // namespace

double exp_integral(double c, double a, double b) {
  const double h = b - a;
  return std::exp(-c * a) * h * phi1(c * h);
}

double texp_integral(double c, double a, double b) {
  const double h = b - a;
  const double x = c * h;
  return std::exp(-c * a) * h * (a * phi1(x) + h * phi2(x));
}

double exp_haar_inner(double c, HaarIndex j) {
  if (!std::isfinite(c)) throw std::invalid_argument("exp_haar_inner: non-finite c");
  std::array<HaarIndex::Piece, 2> pc{};
  const int n = j.pieces(pc);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += pc[i].value * exp_integral(c, pc[i].lo, pc[i].hi);
  return sum;
}

double texp_haar_inner(double c, HaarIndex j) {
  if (!std::isfinite(c)) throw std::invalid_argument("texp_haar_inner: non-finite c");
  std::array<HaarIndex::Piece, 2> pc{};
  const int n = j.pieces(pc);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) sum += pc[i].value * texp_integral(c, pc[i].lo, pc[i].hi);
  return sum;
}

std::size_t haar_dimension(int m) {
  if (m < 0 || m > 30) throw std::invalid_argument("Haar level out of range: " + std::to_string(m));
  return std::size_t{1} << m;
}

HaarCoefficients HaarCoefficients::zeros(int m) {
  return {m, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(haar_dimension(m)))};
}

HaarCoefficients HaarCoefficients::embedded(int m) const {
  if (m < level) {
    throw std::invalid_argument("HaarCoefficients::embedded: cannot shrink level " + std::to_string(level) +
                                " to " + std::to_string(m));
  }
  HaarCoefficients out = zeros(m);
  out.values.head(values.size()) = values;
  return out;
}

double HaarCoefficients::evaluate(double x) const {
  if (!(x >= 0.0 && x <= 1.0)) throw std::invalid_argument("HaarCoefficients::evaluate: x outside [0,1]");
  double sum = values[0];
  for (int l = 1; l <= level; ++l) {
    const double cells = std::ldexp(1.0, l - 1);
    const double scaled = x * cells;
    int p;
    bool positive;
    if (x == 1.0) {
      p = static_cast<int>(cells);
      positive = false;
    } else {
      const double cell = std::floor(scaled);
      p = static_cast<int>(cell) + 1;
      positive = (scaled - cell) < 0.5;
    }
    const double amp = std::sqrt(cells);
    const int j = static_cast<int>(cells) + p;
    sum += values[j - 1] * (positive ? amp : -amp);
  }
  return sum;
}

Eigen::VectorXd haar_analysis(std::span<const double> cell_integrals) {
  const std::size_t n = cell_integrals.size();
  if (n == 0 || !std::has_single_bit(n)) {
    throw std::invalid_argument("haar_analysis: cell count must be a power of two");
  }
  const int m = std::bit_width(n) - 1;
  Eigen::VectorXd coeffs(static_cast<Eigen::Index>(n));
  std::vector<double> sums(cell_integrals.begin(), cell_integrals.end());
  // At level l the running sums hold integrals over the 2^l cells of width 2^{-l};
  // Phi_j with j = 2^{l-1} + p is amp * (left half - right half) of cell p at level l-1.
  for (int l = m; l >= 1; --l) {
    const std::size_t half = std::size_t{1} << (l - 1);
    const double amp = std::sqrt(static_cast<double>(half));
    for (std::size_t k = 0; k < half; ++k) {
      coeffs[static_cast<Eigen::Index>(half + k)] = amp * (sums[2 * k] - sums[2 * k + 1]);
      sums[k] = sums[2 * k] + sums[2 * k + 1];
    }
  }
  coeffs[0] = sums[0];
  return coeffs;
}

HaarCoefficients project(const std::function<double(double)>& f, int m) {
  const std::size_t n = haar_dimension(m);
  std::vector<double> cells(n);
  const double h = 1.0 / static_cast<double>(n);
  for (std::size_t k = 0; k < n; ++k) {
    cells[k] = gauss_legendre4(f, static_cast<double>(k) * h, static_cast<double>(k + 1) * h);
  }
  return {m, haar_analysis(cells)};
}

HaarCoefficients project(const SampledFunction& samples, int m) {
  const std::size_t n = haar_dimension(m);
  if (samples.cells() < kMinSamplesPerHaarCell * n) {
    throw std::invalid_argument("project: sample grid with " + std::to_string(samples.cells()) +
                                " cells is too coarse for level " + std::to_string(m));
  }
  const auto cells = samples.cell_integrals(n);
  return {m, haar_analysis(cells)};
}

}  // namespace dsmreg
