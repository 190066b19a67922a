#pragma once

#include <memory>
#include <optional>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "dsmreg/assembly.hpp"
#include "dsmreg/haar.hpp"
#include "dsmreg/sampling.hpp"

namespace dsmreg {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// How the discrepancy functional weighs the newest term.
/// formal:  G_n = q G_{n-1} + (1-q) a_n ||gamma||
/// listing: G_n = q G_{n-1} +       a_n ||gamma||
enum class GnmVariant { formal, listing };

struct SolverConfig {
  double alpha0 = 1.0;
  double q = 0.25;
  double C = 2.01;
  double eps = 0.99;
  double eta = 10.0;
  int max_iter = 50;
  int m_cap = 6;
  GnmVariant gnm = GnmVariant::formal;
  bool stop_at_m_cap = false;

  /// Throws ConfigError unless alpha0 > 0, 0 < q < 1, C > 2, 0 < eps < 1, eta >= 10,
  /// max_iter >= 1 and 1 <= m_cap <= 12.
  void validate() const;

  /// alpha0 = 1, q = 0.25, C = 2.01, eps = 0.99, eta = 10.
  static SolverConfig paper();
};

/// w_j^(n) = q^{n-j-1} - q^{n-j}, j = 0..n-1. Their sum telescopes to 1 - q^n.
std::vector<double> geometric_weights(int n, double q);

struct RankChoice {
  int level = 1;    // clamped into [1, m_cap]
  int raw = 0;      // max of the three ceiling terms before clamping
  bool capped = false;
};

/// Smallest level meeting the three operator-error targets for parameter a:
///   c1/2^{4m} <= a/2,  17/(180 2^{2m}) <= eta a^2,  c1/2^{2m} <= sqrt(a)/2.
RankChoice rank_schedule(double a, double c1, double eta, int m_cap);

struct StepRecord {
  int n = 0;
  double a = 0.0;
  int m = 0;
  double G = 0.0;
  double gamma_norm = 0.0;
  double residual = 0.0;  // worst relative residual of the two shifted solves
  bool capped = false;
};

struct IterationState {
  int n = 0;
  double a = 0.0;
  HaarCoefficients u = HaarCoefficients::zeros(0);
  double G = 0.0;
  std::vector<StepRecord> history;

  int m() const { return u.level; }
  static IterationState initial(double alpha0);
};

/// u_new = q * pad(u_prev) + (1 - q) * zeta, n -> n + 1, a -> q a.
/// Throws std::invalid_argument if zeta lives on a coarser level than u_prev.
IterationState dsm_step(const IterationState& state, const HaarCoefficients& zeta, double q);

/// G_n from G_{n-1}, a_n and ||gamma||.
double discrepancy_update(double G_prev, double a, double gamma_norm, double q,
                          GnmVariant variant = GnmVariant::formal);

/// Haar-coordinate operators at one level: T-side matrix with adjoint data v,
/// Q-side matrix with projected data g.
struct LevelSystem {
  std::shared_ptr<const GramMatrix> T;
  std::shared_ptr<const GramMatrix> Q;
  Eigen::VectorXd v;
  Eigen::VectorXd g;
};

class OperatorSource {
 public:
  virtual ~OperatorSource() = default;
  virtual const LevelSystem& at(int m) = 0;
  virtual double c1() const = 0;
};

/// Degenerate-kernel operators: A_m, B_m from the Simpson rule, v from the Taylor adjoint.
class DegenerateKernelSource final : public OperatorSource {
 public:
  DegenerateKernelSource(std::shared_ptr<GramCache> grams, SampledFunction data);

  const LevelSystem& at(int m) override;
  double c1() const override { return grams_->kernel().c1; }

 private:
  std::shared_ptr<GramCache> grams_;
  SampledFunction data_;
  std::map<int, LevelSystem> levels_;
};

/// Fixed-level baseline operators: A^T A and A A^T from the Haar-Galerkin matrix A of K,
/// with v = A^T g.
class GalerkinSource final : public OperatorSource {
 public:
  GalerkinSource(std::shared_ptr<GramCache> grams, SampledFunction data);

  const LevelSystem& at(int m) override;
  double c1() const override { return grams_->kernel().c1; }

 private:
  std::shared_ptr<GramCache> grams_;
  SampledFunction data_;
  std::map<int, LevelSystem> levels_;
};

/// Step-by-step driver of the scheme; no stopping rule.
class DsmIterator {
 public:
  /// Adaptive levels from rank_schedule when fixed_level is empty.
  DsmIterator(OperatorSource& source, const SolverConfig& config, std::optional<int> fixed_level = std::nullopt);

  const StepRecord& step();
  const IterationState& state() const { return state_; }

 private:
  OperatorSource& source_;
  SolverConfig config_;
  std::optional<int> fixed_level_;
  IterationState state_;
};

enum class StopReason { discrepancy_met, initial_below_threshold, max_iter, m_cap };

std::string_view to_string(StopReason reason);
StopReason parse_stop_reason(std::string_view text);

struct SolveOutcome {
  HaarCoefficients solution;
  int n_delta = 0;
  int m_final = 0;
  double G_final = 0.0;
  double threshold = 0.0;  // C delta^eps
  StopReason stop_reason = StopReason::max_iter;
  bool level_capped = false;
  std::vector<StepRecord> trace;
};

/// Adaptive-level iteration stopped by the discrepancy rule G_n <= C delta^eps.
SolveOutcome run_adaptive(OperatorSource& source, double delta, const SolverConfig& config);

/// Same loop with m_n = m for every n.
SolveOutcome run_fixed(OperatorSource& source, double delta, const SolverConfig& config, int m);

/// Direct weighted sum u_n = sum_j w^(n) T_{a_{j+1}, m_{j+1}}^{-1} v_{m_{j+1}}, with
/// weight q^{n-j-1} - q^{n-j} on term j = 0..n-1, each term padded to level m_n.
HaarCoefficients closed_form_iterate(OperatorSource& source, double alpha0, double q,
                                     const std::vector<int>& schedule);

}  // namespace dsmreg
