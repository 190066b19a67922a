#include "dsmreg/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>

namespace dsmreg {

double laplace_rhs(double s) {
  if (std::abs(s) < 1e-3) {
    const double s2 = s * s;
    return 0.5 - s / 3.0 + s2 / 8.0 - s2 * s / 30.0 + s2 * s2 / 144.0;
  }
  return (-std::expm1(-s) - s * std::exp(-s)) / (s * s);
}

Problem exact_problem() {
  Problem p;
  p.kernel = exponential_kernel();
  p.exact_rhs = laplace_rhs;
  p.exact_solution = [](double t) { return t; };
  p.y_norm = 1.0 / std::sqrt(3.0);
  return p;
}

NoisyData add_noise(const SampledFunction& f, const NoiseSpec& spec) {
  if (!(spec.rel_level > 0.0 && spec.rel_level < 1.0)) {
    throw std::invalid_argument("add_noise: rel_level must lie in (0,1)");
  }
  std::mt19937_64 rng(spec.seed);
  std::vector<double> e(f.cells() + 1);
  if (spec.distribution == NoiseDistribution::uniform) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (double& x : e) x = dist(rng);
  } else {
    std::normal_distribution<double> dist(0.0, 1.0);
    for (double& x : e) x = dist(rng);
  }
  const double delta_abs = spec.rel_level * f.l2_norm();
  const double scale = delta_abs / SampledFunction(e).l2_norm();
  std::vector<double> noisy(f.values().begin(), f.values().end());
  for (std::size_t k = 0; k < e.size(); ++k) noisy[k] += scale * e[k];
  return {SampledFunction(std::move(noisy)), delta_abs};
}

std::size_t sample_cells(int m_cap) {
  if (m_cap < 1 || m_cap > 16) throw std::invalid_argument("sample_cells: m_cap out of range");
  return static_cast<std::size_t>(kTaylorCellsPerDyadic) << m_cap;
}

double avg_error(const HaarCoefficients& u, const std::function<double(double)>& u_exact) {
  double sum = 0.0;
  for (int j = 1; j <= 100; ++j) {
    const double t = 0.01 * (j - 1);
    sum += std::abs(u_exact(t) - u.evaluate(t));
  }
  return sum / 100.0;
}

std::string_view to_string(Scheme scheme) { return scheme == Scheme::adaptive ? "adaptive" : "fixed"; }

Scheme parse_scheme(std::string_view text) {
  if (text == "adaptive") return Scheme::adaptive;
  if (text == "fixed") return Scheme::fixed;
  throw std::invalid_argument("unknown scheme: " + std::string(text));
}

bool ExperimentRow::same_result(const ExperimentRow& o) const {
  return delta_rel == o.delta_rel && scheme == o.scheme && seed == o.seed && avg == o.avg &&
         m_final == o.m_final && n_iters == o.n_iters && G_final == o.G_final && stop_reason == o.stop_reason;
}

Experiment::Experiment(Problem problem, const SolverConfig& config, int fixed_m)
    : problem_(std::move(problem)), config_(config), fixed_m_(fixed_m) {
  config_.validate();
  if (fixed_m_ < 1 || fixed_m_ > 12) throw ConfigError("fixed_m must lie in [1, 12]");
  validate(problem_.kernel);
  exact_ = SampledFunction::sample(problem_.exact_rhs, sample_cells(std::max(config_.m_cap, fixed_m_)));
  grams_ = std::make_shared<GramCache>(problem_.kernel);
}

RunRecord Experiment::run(double delta_rel, std::uint64_t seed, Scheme scheme,
                          NoiseDistribution distribution) const {
  const auto start = std::chrono::steady_clock::now();
  NoisyData data = add_noise(exact_, {delta_rel, seed, distribution});
  RunRecord rec;
  rec.delta_abs = data.delta_abs;
  if (scheme == Scheme::adaptive) {
    DegenerateKernelSource source(grams_, std::move(data.samples));
    rec.outcome = run_adaptive(source, rec.delta_abs, config_);
  } else {
    GalerkinSource source(grams_, std::move(data.samples));
    rec.outcome = run_fixed(source, rec.delta_abs, config_, fixed_m_);
  }
  const auto stop = std::chrono::steady_clock::now();

  ExperimentRow& row = rec.row;
  row.delta_rel = delta_rel;
  row.scheme = scheme;
  row.seed = seed;
  row.avg = avg_error(rec.outcome.solution, problem_.exact_solution);
  row.m_final = rec.outcome.m_final;
  row.n_iters = rec.outcome.n_delta;
  row.G_final = rec.outcome.G_final;
  row.wall_seconds = std::chrono::duration<double>(stop - start).count();
  row.stop_reason = rec.outcome.stop_reason;
  return rec;
}

std::vector<RunRecord> run_table(const TableSpec& spec) {
  const Experiment experiment(exact_problem(), spec.config, spec.fixed_m);
  std::vector<RunRecord> out;
  out.reserve(spec.levels.size() * spec.seeds.size() * spec.schemes.size());
  for (double level : spec.levels) {
    for (std::uint64_t seed : spec.seeds) {
      for (Scheme scheme : spec.schemes) out.push_back(experiment.run(level, seed, scheme, spec.distribution));
    }
  }
  return out;
}

namespace {

constexpr std::string_view kHeader =
    "delta_rel,scheme,seed,avg,m_final,n_iters,G_final,wall_seconds,stop_reason";

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

template <class T>
T parse_number(std::string_view field, const char* what) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw std::invalid_argument(std::string("CSV: bad ") + what + " field '" + std::string(field) + "'");
  }
  return value;
}

}  // namespace

void write_csv(std::ostream& out, const std::vector<ExperimentRow>& rows) {
  out << kHeader << '\n';
  for (const auto& r : rows) {
    out << format_double(r.delta_rel) << ',' << to_string(r.scheme) << ',' << r.seed << ','
        << format_double(r.avg) << ',' << r.m_final << ',' << r.n_iters << ',' << format_double(r.G_final) << ','
        << format_double(r.wall_seconds) << ',' << to_string(r.stop_reason) << '\n';
  }
}

std::vector<ExperimentRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) throw std::invalid_argument("CSV: missing or wrong header");
  std::vector<ExperimentRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string_view> f;
    std::string_view rest(line);
    for (;;) {
      const auto comma = rest.find(',');
      f.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (f.size() != 9) throw std::invalid_argument("CSV: expected 9 fields, got " + std::to_string(f.size()));
    ExperimentRow r;
    r.delta_rel = parse_number<double>(f[0], "delta_rel");
    r.scheme = parse_scheme(f[1]);
    r.seed = parse_number<std::uint64_t>(f[2], "seed");
    r.avg = parse_number<double>(f[3], "avg");
    r.m_final = parse_number<int>(f[4], "m_final");
    r.n_iters = parse_number<int>(f[5], "n_iters");
    r.G_final = parse_number<double>(f[6], "G_final");
    r.wall_seconds = parse_number<double>(f[7], "wall_seconds");
    r.stop_reason = parse_stop_reason(f[8]);
    rows.push_back(r);
  }
  return rows;
}

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

std::vector<SummaryLine> summarize(const std::vector<ExperimentRow>& rows) {
  std::vector<std::pair<double, Scheme>> keys;
  for (const auto& r : rows) {
    const std::pair key{r.delta_rel, r.scheme};
    if (std::find(keys.begin(), keys.end(), key) == keys.end()) keys.push_back(key);
  }
  std::vector<SummaryLine> out;
  for (const auto& [level, scheme] : keys) {
    std::vector<double> avg, m, n, wall;
    SummaryLine line;
    line.delta_rel = level;
    line.scheme = scheme;
    for (const auto& r : rows) {
      if (r.delta_rel != level || r.scheme != scheme) continue;
      avg.push_back(r.avg);
      m.push_back(r.m_final);
      n.push_back(r.n_iters);
      wall.push_back(r.wall_seconds);
      if (r.stop_reason != StopReason::discrepancy_met && r.stop_reason != StopReason::initial_below_threshold) {
        ++line.flagged;
      }
    }
    line.runs = avg.size();
    line.median_avg = median(avg);
    line.median_m = median(m);
    line.median_n = median(n);
    line.median_wall = median(wall);
    out.push_back(line);
  }
  return out;
}

void print_summary(std::ostream& out, const std::vector<SummaryLine>& lines) {
  std::ostringstream s;
  s << std::left << std::setw(10) << "delta" << std::setw(10) << "scheme" << std::setw(6) << "runs"
    << std::setw(10) << "Avg" << std::setw(6) << "m" << std::setw(6) << "n" << std::setw(12) << "wall[s]"
    << "flagged\n";
  for (const auto& l : lines) {
    std::ostringstream level;
    level << l.delta_rel * 100.0 << '%';
    s << std::left << std::setw(10) << level.str() << std::setw(10) << to_string(l.scheme) << std::setw(6)
      << l.runs << std::setw(10) << std::fixed << std::setprecision(4) << l.median_avg << std::setw(6)
      << std::setprecision(1) << l.median_m << std::setw(6) << l.median_n << std::setw(12)
      << std::setprecision(4) << l.median_wall << l.flagged << '\n';
    s.unsetf(std::ios::fixed);
  }
  out << s.str();
}

}  // namespace dsmreg
