#include "dsmreg/dsm.hpp"

#include <algorithm>
#include <cmath>

#include "dsmreg/quadrature.hpp"
#include "dsmreg/shifted_solver.hpp"

namespace dsmreg {

void SolverConfig::validate() const {
  if (!(alpha0 > 0.0) || !std::isfinite(alpha0)) throw ConfigError("alpha0 must be positive");
  if (!(q > 0.0 && q < 1.0)) throw ConfigError("q must lie in (0,1)");
  if (!(C > 2.0) || !std::isfinite(C)) throw ConfigError("C must exceed 2");
  if (!(eps > 0.0 && eps < 1.0)) throw ConfigError("eps must lie in (0,1)");
  if (!(eta >= 10.0) || !std::isfinite(eta)) throw ConfigError("eta must be at least 10");
  if (max_iter < 1) throw ConfigError("max_iter must be at least 1");
  if (m_cap < 1 || m_cap > 12) throw ConfigError("m_cap must lie in [1, 12]");
}

SolverConfig SolverConfig::paper() { return SolverConfig{}; }

std::vector<double> geometric_weights(int n, double q) {
  if (n < 1) throw std::invalid_argument("geometric_weights: n must be >= 1");
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric_weights: q must lie in (0,1)");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    w[static_cast<std::size_t>(j)] = std::pow(q, n - j - 1) - std::pow(q, n - j);
  }
  return w;
}

RankChoice rank_schedule(double a, double c1, double eta, int m_cap) {
  if (!(a > 0.0) || !std::isfinite(a)) throw std::invalid_argument("rank_schedule: a must be positive");
  if (!(c1 > 0.0)) throw std::invalid_argument("rank_schedule: c1 must be positive");
  if (!(eta > 0.0)) throw std::invalid_argument("rank_schedule: eta must be positive");
  if (m_cap < 1) throw std::invalid_argument("rank_schedule: m_cap must be >= 1");
  const double ln2 = std::log(2.0);
  const double t1 = std::ceil(std::log(2.0 * c1 / a) / (4.0 * ln2));
  const double t2 = std::ceil(std::log(17.0 / (180.0 * eta * a * a)) / (2.0 * ln2));
  const double t3 = std::ceil(std::log(2.0 * c1 / std::sqrt(a)) / (2.0 * ln2));
  const double raw = std::max({t1, t2, t3});

  RankChoice out;
  out.raw = static_cast<int>(std::clamp(raw, -1e6, 1e6));
  out.capped = raw > m_cap;
  out.level = std::clamp(out.raw, 1, m_cap);
  return out;
}

IterationState IterationState::initial(double alpha0) {
  IterationState s;
  s.a = alpha0;
  return s;
}

IterationState dsm_step(const IterationState& state, const HaarCoefficients& zeta, double q) {
  if (zeta.level < state.u.level) {
    throw std::invalid_argument("dsm_step: level would shrink from " + std::to_string(state.u.level) + " to " +
                                std::to_string(zeta.level));
  }
  IterationState next;
  next.n = state.n + 1;
  next.a = q * state.a;
  next.u = state.u.embedded(zeta.level);
  next.u.values = q * next.u.values + (1.0 - q) * zeta.values;
  next.G = state.G;
  next.history = state.history;
  return next;
}

double discrepancy_update(double G_prev, double a, double gamma_norm, double q, GnmVariant variant) {
  if (G_prev < 0.0 || a < 0.0 || gamma_norm < 0.0) {
    throw std::invalid_argument("discrepancy_update: inputs must be non-negative");
  }
  const double factor = variant == GnmVariant::formal ? (1.0 - q) : 1.0;
  return q * G_prev + factor * a * gamma_norm;
}

DegenerateKernelSource::DegenerateKernelSource(std::shared_ptr<GramCache> grams, SampledFunction data)
    : grams_(std::move(grams)), data_(std::move(data)) {}

const LevelSystem& DegenerateKernelSource::at(int m) {
  if (auto it = levels_.find(m); it != levels_.end()) return it->second;
  LevelSystem sys;
  sys.T = grams_->domain(m);
  sys.Q = grams_->kernel().symmetric ? sys.T : grams_->range(m);
  sys.v = assemble_rhs(grams_->kernel(), taylor_partition(m), data_, m);
  sys.g = data_coefficients(data_, m);
  return levels_.emplace(m, std::move(sys)).first->second;
}

GalerkinSource::GalerkinSource(std::shared_ptr<GramCache> grams, SampledFunction data)
    : grams_(std::move(grams)), data_(std::move(data)) {}

const LevelSystem& GalerkinSource::at(int m) {
  if (auto it = levels_.find(m); it != levels_.end()) return it->second;
  LevelSystem sys;
  sys.T = grams_->galerkin_normal(m);
  sys.Q = grams_->galerkin_normal_range(m);
  sys.g = data_coefficients(data_, m);
  sys.v = grams_->galerkin(m)->entries.transpose() * sys.g;
  return levels_.emplace(m, std::move(sys)).first->second;
}

DsmIterator::DsmIterator(OperatorSource& source, const SolverConfig& config, std::optional<int> fixed_level)
    : source_(source), config_(config), fixed_level_(fixed_level), state_(IterationState::initial(config.alpha0)) {
  config_.validate();
  if (fixed_level_ && *fixed_level_ < 1) throw ConfigError("fixed level must be >= 1");
}

const StepRecord& DsmIterator::step() {
  const double a = config_.q * state_.a;
  int m = 0;
  bool capped = false;
  if (fixed_level_) {
    m = *fixed_level_;
  } else {
    const RankChoice choice = rank_schedule(a, source_.c1(), config_.eta, config_.m_cap);
    m = std::max(choice.level, state_.m());
    capped = choice.capped;
  }

  const LevelSystem& sys = source_.at(m);
  const ShiftedCholesky t_factor(sys.T->entries, a);
  const Eigen::VectorXd zeta = t_factor.solve(sys.v);
  Eigen::VectorXd gamma;
  double residual = relative_residual(sys.T->entries, a, zeta, sys.v);
  if (sys.Q == sys.T) {
    gamma = t_factor.solve(sys.g);
  } else {
    gamma = ShiftedCholesky(sys.Q->entries, a).solve(sys.g);
  }
  residual = std::max(residual, relative_residual(sys.Q->entries, a, gamma, sys.g));

  IterationState next = dsm_step(state_, HaarCoefficients{m, zeta}, config_.q);
  const double gamma_norm = gamma.norm();
  next.G = discrepancy_update(state_.G, next.a, gamma_norm, config_.q, config_.gnm);
  next.history.push_back({next.n, next.a, m, next.G, gamma_norm, residual, capped});
  state_ = std::move(next);
  return state_.history.back();
}

std::string_view to_string(StopReason reason) {
  switch (reason) {
    case StopReason::discrepancy_met: return "discrepancy_met";
    case StopReason::initial_below_threshold: return "initial_below_threshold";
    case StopReason::max_iter: return "max_iter";
    case StopReason::m_cap: return "m_cap";
  }
  return "unknown";
}

StopReason parse_stop_reason(std::string_view text) {
  for (auto r : {StopReason::discrepancy_met, StopReason::initial_below_threshold, StopReason::max_iter,
                 StopReason::m_cap}) {
    if (to_string(r) == text) return r;
  }
  throw std::invalid_argument("unknown stop reason: " + std::string(text));
}

namespace {

SolveOutcome run_loop(OperatorSource& source, double delta, const SolverConfig& config,
                      std::optional<int> fixed_level) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw std::invalid_argument("delta must be positive");
  DsmIterator it(source, config, fixed_level);
  SolveOutcome out;
  out.threshold = config.C * std::pow(delta, config.eps);
  out.stop_reason = StopReason::max_iter;
  for (int n = 1; n <= config.max_iter; ++n) {
    const StepRecord& rec = it.step();
    out.level_capped = out.level_capped || rec.capped;
    if (rec.G <= out.threshold) {
      out.stop_reason = n == 1 ? StopReason::initial_below_threshold : StopReason::discrepancy_met;
      break;
    }
    if (rec.capped && config.stop_at_m_cap) {
      out.stop_reason = StopReason::m_cap;
      break;
    }
  }
  const IterationState& s = it.state();
  out.solution = s.u;
  out.n_delta = s.n;
  out.m_final = s.m();
  out.G_final = s.G;
  out.trace = s.history;
  return out;
}

}  // namespace

SolveOutcome run_adaptive(OperatorSource& source, double delta, const SolverConfig& config) {
  return run_loop(source, delta, config, std::nullopt);
}

SolveOutcome run_fixed(OperatorSource& source, double delta, const SolverConfig& config, int m) {
  if (m < 1) throw ConfigError("fixed level must be >= 1");
  return run_loop(source, delta, config, m);
}

HaarCoefficients closed_form_iterate(OperatorSource& source, double alpha0, double q,
                                     const std::vector<int>& schedule) {
  if (schedule.empty()) throw std::invalid_argument("closed_form_iterate: empty schedule");
  const int n = static_cast<int>(schedule.size());
  const int top = *std::max_element(schedule.begin(), schedule.end());
  HaarCoefficients sum = HaarCoefficients::zeros(top);
  double a = alpha0;
  for (int j = 0; j < n; ++j) {
    a *= q;  // a_{j+1}
    const int m = schedule[static_cast<std::size_t>(j)];
    const LevelSystem& sys = source.at(m);
    const HaarCoefficients term{m, solve_shifted(sys.T->entries, a, sys.v)};
    const double weight = std::pow(q, n - j - 1) - std::pow(q, n - j);
    sum.values += weight * term.embedded(top).values;
  }
  return sum;
}

}  // namespace dsmreg
