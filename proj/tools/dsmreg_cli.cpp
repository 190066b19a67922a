// Command-line driver: `solve` runs single problems, `table` runs the noise-level sweep.

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmreg/experiment.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitFlagged = 3;

struct Options {
  std::optional<double> alpha0, q, C, eps, eta;
  std::optional<int> max_iter, m_cap;
  std::vector<double> noise{0.05, 0.01, 0.005, 0.0005};
  std::vector<std::uint64_t> seed{1};
  std::optional<int> seeds;
  std::string scheme = "both";
  int fixed_m = 4;
  std::string preset = "paper";
  std::string out;
  std::string gnm_variant = "formal";
  std::string distribution = "uniform";
  bool trace = false;
};

void add_common(CLI::App& cmd, Options& o) {
  cmd.add_option("--alpha0", o.alpha0, "initial regularization parameter alpha0 > 0");
  cmd.add_option("--q", o.q, "geometric ratio in (0,1)");
  cmd.add_option("--C", o.C, "stopping constant > 2");
  cmd.add_option("--eps", o.eps, "stopping exponent in (0,1)");
  cmd.add_option("--eta", o.eta, "rank-schedule relaxation >= 10");
  cmd.add_option("--noise", o.noise, "relative noise level(s)")->delimiter(',');
  cmd.add_option("--seed", o.seed, "RNG seed(s)")->delimiter(',');
  cmd.add_option("--seeds", o.seeds, "use seeds 1..n");
  cmd.add_option("--scheme", o.scheme, "adaptive|fixed|both")
      ->check(CLI::IsMember({"adaptive", "fixed", "both"}));
  cmd.add_option("--fixed-m", o.fixed_m, "level of the fixed baseline");
  cmd.add_option("--max-iter", o.max_iter, "iteration cap");
  cmd.add_option("--m-cap", o.m_cap, "maximum Haar level");
  cmd.add_option("--preset", o.preset, "parameter preset")->check(CLI::IsMember({"paper"}));
  cmd.add_option("--out", o.out, "CSV output path");
  cmd.add_option("--gnm-variant", o.gnm_variant, "discrepancy recursion: formal|listing")
      ->check(CLI::IsMember({"formal", "listing"}));
  cmd.add_option("--noise-dist", o.distribution, "uniform|gaussian")
      ->check(CLI::IsMember({"uniform", "gaussian"}));
}

dsmreg::TableSpec build_spec(const Options& o) {
  dsmreg::TableSpec spec;
  dsmreg::SolverConfig& c = spec.config;
  c = dsmreg::SolverConfig::paper();
  if (o.alpha0) c.alpha0 = *o.alpha0;
  if (o.q) c.q = *o.q;
  if (o.C) c.C = *o.C;
  if (o.eps) c.eps = *o.eps;
  if (o.eta) c.eta = *o.eta;
  if (o.max_iter) c.max_iter = *o.max_iter;
  if (o.m_cap) c.m_cap = *o.m_cap;
  c.gnm = o.gnm_variant == "listing" ? dsmreg::GnmVariant::listing : dsmreg::GnmVariant::formal;
  c.validate();

  spec.levels = o.noise;
  for (double level : spec.levels) {
    if (!(level > 0.0 && level < 1.0)) throw dsmreg::ConfigError("noise levels must lie in (0,1)");
  }
  if (o.seeds) {
    if (*o.seeds < 1) throw dsmreg::ConfigError("--seeds must be positive");
    spec.seeds.clear();
    for (int s = 1; s <= *o.seeds; ++s) spec.seeds.push_back(static_cast<std::uint64_t>(s));
  } else {
    spec.seeds = o.seed;
  }
  if (o.scheme == "adaptive") {
    spec.schemes = {dsmreg::Scheme::adaptive};
  } else if (o.scheme == "fixed") {
    spec.schemes = {dsmreg::Scheme::fixed};
  } else {
    spec.schemes = {dsmreg::Scheme::adaptive, dsmreg::Scheme::fixed};
  }
  spec.fixed_m = o.fixed_m;
  spec.distribution =
      o.distribution == "gaussian" ? dsmreg::NoiseDistribution::gaussian : dsmreg::NoiseDistribution::uniform;
  return spec;
}

void print_trace(const dsmreg::RunRecord& rec) {
  const auto& r = rec.row;
  std::ostringstream out;
  out << "# " << dsmreg::to_string(r.scheme) << " delta_rel=" << r.delta_rel << " seed=" << r.seed
      << " delta_abs=" << rec.delta_abs << " threshold=" << rec.outcome.threshold << '\n';
  out << "#   n        a_n  m         G_n     ||gamma||  capped\n";
  for (const auto& s : rec.outcome.trace) {
    out << "# " << std::setw(3) << s.n << ' ' << std::setw(10) << std::setprecision(4) << s.a << ' ' << std::setw(2)
        << s.m << ' ' << std::setw(11) << s.G << ' ' << std::setw(11) << s.gamma_norm << "  "
        << (s.capped ? "yes" : "no") << '\n';
  }
  out << "# stop=" << dsmreg::to_string(rec.outcome.stop_reason) << " n_delta=" << r.n_iters
      << " m_final=" << r.m_final << " Avg=" << r.avg << (rec.outcome.level_capped ? " (level capped)" : "")
      << '\n';
  std::cout << out.str();
}

int emit(const std::vector<dsmreg::RunRecord>& records, const Options& o, bool summary) {
  std::vector<dsmreg::ExperimentRow> rows;
  for (const auto& r : records) rows.push_back(r.row);
  if (o.out.empty()) {
    dsmreg::write_csv(std::cout, rows);
  } else {
    std::ofstream file(o.out);
    if (!file) {
      std::cerr << "cannot open " << o.out << '\n';
      return kExitConfig;
    }
    dsmreg::write_csv(file, rows);
  }
  if (summary) dsmreg::print_summary(o.out.empty() ? std::cerr : std::cout, dsmreg::summarize(rows));
  for (const auto& r : rows) {
    if (r.stop_reason != dsmreg::StopReason::discrepancy_met &&
        r.stop_reason != dsmreg::StopReason::initial_below_threshold) {
      return kExitFlagged;
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive-rank DSM regularization for first-kind Fredholm equations"};
  app.require_subcommand(1);

  Options solve_opts;
  Options table_opts;
  auto* solve = app.add_subcommand("solve", "run the test problem at the given noise level(s) and seed(s)");
  add_common(*solve, solve_opts);
  solve->add_flag("--trace", solve_opts.trace, "print the per-iteration trace");
  solve_opts.noise = {0.05};
  auto* table = app.add_subcommand("table", "run the noise-level sweep and print a median summary");
  add_common(*table, table_opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  const bool is_solve = solve->parsed();
  const Options& opts = is_solve ? solve_opts : table_opts;
  dsmreg::TableSpec spec;
  try {
    spec = build_spec(opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }

  try {
    const auto records = dsmreg::run_table(spec);
    if (is_solve && opts.trace) {
      for (const auto& r : records) print_trace(r);
    }
    return emit(records, opts, !is_solve);
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  }
}
