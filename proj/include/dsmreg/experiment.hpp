#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "dsmreg/assembly.hpp"
#include "dsmreg/dsm.hpp"
#include "dsmreg/haar.hpp"
#include "dsmreg/sampling.hpp"

namespace dsmreg {

/// Test problem: (Ku)(s) = int_0^1 e^{-st} u(t) dt = f(s) with u(t) = t.
struct Problem {
  Kernel kernel;
  std::function<double(double)> exact_rhs;
  std::function<double(double)> exact_solution;
  std::optional<double> y_norm;
};

/// f(s) = (1 - (s+1) e^{-s}) / s^2, with the series 1/2 - s/3 + s^2/8 - ... below s = 1e-3.
double laplace_rhs(double s);

Problem exact_problem();

enum class NoiseDistribution { uniform, gaussian };

struct NoiseSpec {
  double rel_level = 0.0;
  std::uint64_t seed = 0;
  NoiseDistribution distribution = NoiseDistribution::uniform;
};

struct NoisyData {
  SampledFunction samples;
  double delta_abs = 0.0;
};

/// f + e with i.i.d. e rescaled so that ||e|| = rel_level * ||f|| exactly in the
/// discrete L2 norm of the grid. Throws std::invalid_argument unless 0 < rel_level < 1.
NoisyData add_noise(const SampledFunction& f, const NoiseSpec& spec);

/// Node count used for data samples: 180 * 2^m_cap cells resolves every Taylor partition up to m_cap.
std::size_t sample_cells(int m_cap);

/// Mean of |u(t_j) - u_approx(t_j)| over t_j = 0.01 (j-1), j = 1..100.
double avg_error(const HaarCoefficients& u, const std::function<double(double)>& u_exact);

enum class Scheme { adaptive, fixed };

std::string_view to_string(Scheme scheme);
Scheme parse_scheme(std::string_view text);

struct ExperimentRow {
  double delta_rel = 0.0;
  Scheme scheme = Scheme::adaptive;
  std::uint64_t seed = 0;
  double avg = 0.0;
  int m_final = 0;
  int n_iters = 0;
  double G_final = 0.0;
  double wall_seconds = 0.0;
  StopReason stop_reason = StopReason::max_iter;

  /// Equality of every field except wall_seconds.
  bool same_result(const ExperimentRow& other) const;
};

struct RunRecord {
  ExperimentRow row;
  SolveOutcome outcome;
  double delta_abs = 0.0;
};

struct TableSpec {
  SolverConfig config = SolverConfig::paper();
  std::vector<double> levels{0.05, 0.01, 0.005, 0.0005};
  std::vector<std::uint64_t> seeds{1};
  std::vector<Scheme> schemes{Scheme::adaptive, Scheme::fixed};
  int fixed_m = 4;
  NoiseDistribution distribution = NoiseDistribution::uniform;
};

/// Shared, immutable inputs of a sweep: the problem, its sampled exact data and the Gram memo.
class Experiment {
 public:
  Experiment(Problem problem, const SolverConfig& config, int fixed_m = 4);

  RunRecord run(double delta_rel, std::uint64_t seed, Scheme scheme,
                NoiseDistribution distribution = NoiseDistribution::uniform) const;

  const Problem& problem() const { return problem_; }
  const SampledFunction& exact_samples() const { return exact_; }
  const SolverConfig& config() const { return config_; }

 private:
  Problem problem_;
  SolverConfig config_;
  int fixed_m_;
  SampledFunction exact_;
  std::shared_ptr<GramCache> grams_;
};

/// One row per (level, seed, scheme), in that nesting order.
std::vector<RunRecord> run_table(const TableSpec& spec);

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::vector<ExperimentRow> read_csv(std::istream& in);

struct SummaryLine {
  double delta_rel = 0.0;
  Scheme scheme = Scheme::adaptive;
  std::size_t runs = 0;
  double median_avg = 0.0;
  double median_m = 0.0;
  double median_n = 0.0;
  double median_wall = 0.0;
  std::size_t flagged = 0;  // rows whose stop_reason is not a discrepancy stop
};

double median(std::vector<double> values);

/// Median aggregation per (level, scheme), ordered as first seen.
std::vector<SummaryLine> summarize(const std::vector<ExperimentRow>& rows);
void print_summary(std::ostream& out, const std::vector<SummaryLine>& lines);

}  // namespace dsmreg
