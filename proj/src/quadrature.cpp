#include "dsmreg/quadrature.hpp"

#include <stdexcept>
#include <string>

namespace dsmreg {

QuadratureRule simpson_rule(int m) {
  if (m < 1 || m > 30) {
    throw std::invalid_argument("simpson_rule: level must be in [1, 30], got " + std::to_string(m));
  }
  const std::size_t panels = std::size_t{1} << m;
  const double h = 1.0 / static_cast<double>(panels);

  QuadratureRule rule;
  rule.level = m;
  rule.points.resize(panels + 1);
  rule.weights.resize(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    // i is zero-based; the weight pattern is stated for the one-based j = i + 1.
    rule.points[i] = static_cast<double>(i) * h;
    if (i == 0 || i == panels) {
      rule.weights[i] = (1.0 / 3.0) * h;
    } else if ((i + 1) % 2 == 0) {
      rule.weights[i] = (4.0 / 3.0) * h;
    } else {
      rule.weights[i] = (2.0 / 3.0) * h;
    }
  }
  return rule;
}

TaylorPartition taylor_partition(int m) {
  if (m < 1 || m > 24) {
    throw std::invalid_argument("taylor_partition: level must be in [1, 24], got " + std::to_string(m));
  }
  const std::size_t n = static_cast<std::size_t>(kTaylorCellsPerDyadic) << m;
  TaylorPartition part;
  part.level = m;
  part.nodes.resize(n + 1);
  for (std::size_t j = 0; j <= n; ++j) {
    part.nodes[j] = static_cast<double>(j) / static_cast<double>(n);
  }
  return part;
}

}  // namespace dsmreg
