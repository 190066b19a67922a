#include "dsmreg/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsmreg {

Kernel exponential_kernel() {
  Kernel k;
  k.eval = [](double s, double t) { return std::exp(-s * t); };
  k.symmetric = true;
  k.c1 = 16.0 / 180.0;
  k.sup_bound = 1.0;
  k.kind = Kernel::Kind::exponential;
  return k;
}

void validate(const Kernel& kernel, int grid) {
  if (!kernel.eval) throw std::invalid_argument("Kernel: missing evaluator");
  if (!(kernel.c1 > 0.0)) throw std::invalid_argument("Kernel: c1 must be positive");
  double sampled_max = 0.0;
  for (int i = 0; i < grid; ++i) {
    for (int j = 0; j < grid; ++j) {
      const double s = static_cast<double>(i) / (grid - 1);
      const double t = static_cast<double>(j) / (grid - 1);
      const double v = kernel.eval(s, t);
      if (!std::isfinite(v)) throw std::invalid_argument("Kernel: non-finite value");
      sampled_max = std::max(sampled_max, std::abs(v));
      if (kernel.symmetric && std::abs(v - kernel.eval(t, s)) > 1e-14) {
        throw std::invalid_argument("Kernel: flagged symmetric but k(s,t) != k(t,s)");
      }
    }
  }
  if (kernel.sup_bound < sampled_max) throw std::invalid_argument("Kernel: sup_bound below sampled maximum");
}

namespace {

void require_level(int m, const char* what) {
  if (m < 1 || m > 16) throw std::invalid_argument(std::string(what) + ": level must be in [1, 16]");
}

// Haar coefficients of the slice t -> k(s, t) (or k(t, s) for the range side).
Eigen::VectorXd slice_coefficients(const Kernel& kernel, double s, int m, GramSide side) {
  const std::size_t n = haar_dimension(m);
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> cells(n);
  if (kernel.kind == Kernel::Kind::exponential) {
    for (std::size_t k = 0; k < n; ++k) {
      cells[k] = exp_integral(s, static_cast<double>(k) * h, static_cast<double>(k + 1) * h);
    }
  } else {
    auto slice = [&](double t) {
      const double v = side == GramSide::domain ? kernel.eval(s, t) : kernel.eval(t, s);
      if (!std::isfinite(v)) throw std::invalid_argument("assemble_gram: non-finite kernel value");
      return v;
    };
    for (std::size_t k = 0; k < n; ++k) {
      cells[k] = gauss_legendre4(slice, static_cast<double>(k) * h, static_cast<double>(k + 1) * h);
    }
  }
  return haar_analysis(cells);
}

}  // namespace

GramMatrix assemble_gram(const Kernel& kernel, int m, GramSide side) {
  require_level(m, "assemble_gram");
  const QuadratureRule rule = simpson_rule(m);
  const auto n = static_cast<Eigen::Index>(haar_dimension(m));
  // Rows of `slices` are the sqrt(beta_l)-scaled coefficient vectors; A = S^T S.
  Eigen::MatrixXd slices(static_cast<Eigen::Index>(rule.size()), n);
  for (std::size_t l = 0; l < rule.size(); ++l) {
    slices.row(static_cast<Eigen::Index>(l)) =
        std::sqrt(rule.weights[l]) * slice_coefficients(kernel, rule.points[l], m, side).transpose();
  }
  GramMatrix gram{m, Eigen::MatrixXd::Zero(n, n)};
  gram.entries.selfadjointView<Eigen::Lower>().rankUpdate(slices.transpose());
  gram.entries = gram.entries.selfadjointView<Eigen::Lower>();
  return gram;
}

Eigen::VectorXd assemble_rhs(const Kernel& kernel, const TaylorPartition& partition, const SampledFunction& f,
                             int m) {
  require_level(m, "assemble_rhs");
  if (kernel.kind != Kernel::Kind::exponential) {
    throw std::invalid_argument("assemble_rhs: Taylor adjoint approximation requires the exponential kernel");
  }
  const std::size_t parts = partition.intervals();
  if (f.cells() < parts) {
    throw std::invalid_argument("assemble_rhs: sample grid with " + std::to_string(f.cells()) +
                                " cells does not resolve a partition into " + std::to_string(parts));
  }
  std::vector<double> zeroth;
  std::vector<double> first;
  f.cell_moments(parts, zeroth, first);

  // Integrals of K_m^* f over the level-m dyadic cells, then the exact Haar analysis.
  const std::size_t n = haar_dimension(m);
  const double h = 1.0 / static_cast<double>(n);
  std::vector<double> cells(n, 0.0);
  for (std::size_t j = 0; j < parts; ++j) {
    const double d = partition.nodes[j];
    const double i0 = zeroth[j];
    const double i1 = first[j];
    if (i0 == 0.0 && i1 == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k) {
      const double lo = static_cast<double>(k) * h;
      const double hi = static_cast<double>(k + 1) * h;
      cells[k] += i0 * exp_integral(d, lo, hi) - i1 * texp_integral(d, lo, hi);
    }
  }
  return haar_analysis(cells);
}

Eigen::VectorXd data_coefficients(const SampledFunction& f, int m) { return project(f, m).values; }

ErrorBudget error_budget(const Kernel& kernel, int m) {
  require_level(m, "error_budget");
  ErrorBudget b;
  b.level = m;
  b.boundT = kernel.c1 / std::ldexp(1.0, 4 * m);
  b.boundKstar = 1.0 / (std::ldexp(1.0, 2 * m) * 180.0);
  b.boundMixed = 17.0 / (std::ldexp(1.0, 2 * m) * 180.0);
  return b;
}

GramMatrix assemble_galerkin(const Kernel& kernel, int m) {
  require_level(m, "assemble_galerkin");
  const auto n = static_cast<Eigen::Index>(haar_dimension(m));
  const double h = 1.0 / static_cast<double>(n);
  // C(k, c) = int over s-cell k, t-cell c of k(s,t); 4-point Gauss-Legendre in s,
  // exact in t for the exponential kernel, 4x4 Gauss-Legendre otherwise.
  // Coarse levels split each s-cell so every panel is at most 1/16 wide.
  const Eigen::Index panels = std::max<Eigen::Index>(1, 16 / n);
  const double w = h / static_cast<double>(panels);
  Eigen::MatrixXd cellint(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const double slo = static_cast<double>(k) * h;
    for (Eigen::Index c = 0; c < n; ++c) {
      const double tlo = static_cast<double>(c) * h;
      auto inner = [&](double s) {
        if (kernel.kind == Kernel::Kind::exponential) return exp_integral(s, tlo, tlo + h);
        return gauss_legendre4([&](double t) { return kernel.eval(s, t); }, tlo, tlo + h);
      };
      double acc = 0.0;
      for (Eigen::Index p = 0; p < panels; ++p) {
        acc += gauss_legendre4(inner, slo + static_cast<double>(p) * w, slo + static_cast<double>(p + 1) * w);
      }
      cellint(k, c) = acc;
    }
  }
  // Analysis along both axes.
  Eigen::MatrixXd rows(n, n);
  std::vector<double> buf(static_cast<std::size_t>(n));
  for (Eigen::Index c = 0; c < n; ++c) {
    for (Eigen::Index k = 0; k < n; ++k) buf[static_cast<std::size_t>(k)] = cellint(k, c);
    rows.col(c) = haar_analysis(buf);
  }
  GramMatrix out{m, Eigen::MatrixXd(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index c = 0; c < n; ++c) buf[static_cast<std::size_t>(c)] = rows(i, c);
    out.entries.row(i) = haar_analysis(buf).transpose();
  }
  return out;
}

std::shared_ptr<const GramMatrix> GramCache::get(int m, int which) {
  {
    const std::lock_guard lock(mutex_);
    if (auto it = cache_.find({m, which}); it != cache_.end()) return it->second;
  }
  GramMatrix g;
  switch (which) {
    case 0: g = assemble_gram(kernel_, m, GramSide::domain); break;
    case 1: g = assemble_gram(kernel_, m, GramSide::range); break;
    case 2: g = assemble_galerkin(kernel_, m); break;
    case 3: {
      const auto a = get(m, 2);
      g = {m, a->entries.transpose() * a->entries};
      break;
    }
    default: {
      const auto a = get(m, 2);
      g = {m, a->entries * a->entries.transpose()};
      break;
    }
  }
  const std::lock_guard lock(mutex_);
  auto key = std::make_pair(m, which);
  if (auto it = cache_.find(key); it != cache_.end()) return it->second;
  auto ptr = std::make_shared<const GramMatrix>(std::move(g));
  cache_.emplace(key, ptr);
  return ptr;
}

}  // namespace dsmreg
