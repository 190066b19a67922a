#include "dsmreg/sampling.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dsmreg {

SampledFunction::SampledFunction(std::vector<double> values) : values_(std::move(values)) {
  if (values_.size() < 2) throw std::invalid_argument("SampledFunction: need at least two nodes");
  for (double v : values_) {
    if (!std::isfinite(v)) throw std::invalid_argument("SampledFunction: non-finite sample");
  }
}

SampledFunction SampledFunction::sample(const std::function<double(double)>& f, std::size_t cells) {
  if (cells == 0) throw std::invalid_argument("SampledFunction::sample: zero cells");
  std::vector<double> v(cells + 1);
  for (std::size_t k = 0; k <= cells; ++k) {
    v[k] = f(static_cast<double>(k) / static_cast<double>(cells));
  }
  return SampledFunction(std::move(v));
}

double SampledFunction::l2_norm() const {
  const double h = spacing();
  double sum = 0.0;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double w = (k == 0 || k + 1 == values_.size()) ? 0.5 : 1.0;
    sum += w * values_[k] * values_[k];
  }
  return std::sqrt(h * sum);
}

namespace {

std::size_t ratio_or_throw(std::size_t fine, std::size_t coarse) {
  if (coarse == 0 || fine % coarse != 0) {
    throw std::invalid_argument("sample grid with " + std::to_string(fine) +
                                " cells does not refine a partition into " + std::to_string(coarse) + " cells");
  }
  return fine / coarse;
}

}  // namespace

std::vector<double> SampledFunction::cell_integrals(std::size_t coarse) const {
  const std::size_t r = ratio_or_throw(cells(), coarse);
  const double h = spacing();
  std::vector<double> out(coarse, 0.0);
  for (std::size_t j = 0; j < coarse; ++j) {
    const std::size_t k0 = j * r;
    double sum = 0.5 * (values_[k0] + values_[k0 + r]);
    for (std::size_t k = k0 + 1; k < k0 + r; ++k) sum += values_[k];
    out[j] = h * sum;
  }
  return out;
}

void SampledFunction::cell_moments(std::size_t coarse, std::vector<double>& zeroth,
                                   std::vector<double>& first) const {
  const std::size_t r = ratio_or_throw(cells(), coarse);
  const double h = spacing();
  zeroth.assign(coarse, 0.0);
  first.assign(coarse, 0.0);
  for (std::size_t j = 0; j < coarse; ++j) {
    const std::size_t k0 = j * r;
    double s0 = 0.5 * (values_[k0] + values_[k0 + r]);
    // (s - c_j) vanishes at the left node and equals r*h at the right node.
    double s1 = 0.5 * static_cast<double>(r) * values_[k0 + r];
    for (std::size_t i = 1; i < r; ++i) {
      s0 += values_[k0 + i];
      s1 += static_cast<double>(i) * values_[k0 + i];
    }
    zeroth[j] = h * s0;
    first[j] = h * h * s1;
  }
}

SampledFunction SampledFunction::operator+(const SampledFunction& other) const {
  if (other.values_.size() != values_.size()) throw std::invalid_argument("SampledFunction: grid mismatch");
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] += other.values_[k];
  return SampledFunction(std::move(v));
}

SampledFunction SampledFunction::operator-(const SampledFunction& other) const {
  if (other.values_.size() != values_.size()) throw std::invalid_argument("SampledFunction: grid mismatch");
  std::vector<double> v(values_);
  for (std::size_t k = 0; k < v.size(); ++k) v[k] -= other.values_[k];
  return SampledFunction(std::move(v));
}

}  // namespace dsmreg
