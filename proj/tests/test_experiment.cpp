#include "dsmreg/experiment.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <gtest/gtest.h>

using namespace dsmreg;

TEST(LaplaceRhs, KnownValues) {
  EXPECT_DOUBLE_EQ(laplace_rhs(0.0), 0.5);
  EXPECT_NEAR(laplace_rhs(1.0), 1.0 - 2.0 / std::exp(1.0), 1e-15);
  EXPECT_NEAR(laplace_rhs(1.0), 0.26424, 1e-5);
  // int_0^1 t e^{-t/2} dt by composite Gauss-Legendre.
  double ref = 0.0;
  for (int k = 0; k < 64; ++k) {
    ref += gauss_legendre4([](double t) { return t * std::exp(-0.5 * t); }, k / 64.0, (k + 1) / 64.0);
  }
  EXPECT_NEAR(laplace_rhs(0.5), ref, 1e-15);
  EXPECT_NEAR(laplace_rhs(0.5), 0.36081604172419946, 1e-15);
}

TEST(LaplaceRhs, SeriesBranchIsContinuous) {
  const double below = laplace_rhs(std::nextafter(1e-3, 0.0));
  const double above = laplace_rhs(1e-3);
  EXPECT_NEAR(below, above, 1e-12);
  for (double s : {1e-9, 1e-6, 5e-4, 9.99e-4}) {
    double ref = 0.0;
    for (int k = 0; k < 8; ++k) {
      ref += gauss_legendre4([s](double t) { return t * std::exp(-s * t); }, k / 8.0, (k + 1) / 8.0);
    }
    EXPECT_NEAR(laplace_rhs(s), ref, 1e-15) << "s=" << s;
  }
}

TEST(ExactProblem, ForwardOperatorReproducesData) {
  const Problem p = exact_problem();
  EXPECT_TRUE(p.kernel.symmetric);
  EXPECT_DOUBLE_EQ(p.kernel.c1, 16.0 / 180.0);
  EXPECT_DOUBLE_EQ(p.kernel.sup_bound, 1.0);
  ASSERT_TRUE(p.y_norm.has_value());
  EXPECT_DOUBLE_EQ(*p.y_norm, 1.0 / std::sqrt(3.0));
  // (K u)(s) by quadrature against f(s) on a grid of s.
  double worst = 0.0;
  for (int i = 0; i <= 100; ++i) {
    const double s = i / 100.0;
    double Ku = 0.0;
    for (int k = 0; k < 32; ++k) {
      Ku += gauss_legendre4([&](double t) { return p.kernel.eval(s, t) * p.exact_solution(t); }, k / 32.0,
                            (k + 1) / 32.0);
    }
    worst = std::max(worst, std::abs(Ku - p.exact_rhs(s)));
  }
  EXPECT_LE(worst, 1e-6);
}

TEST(AddNoise, ExactNormAndDeterminism) {
  const auto f = SampledFunction::sample(laplace_rhs, sample_cells(4));
  for (auto dist : {NoiseDistribution::uniform, NoiseDistribution::gaussian}) {
    for (std::uint64_t seed : {1u, 2u, 99u}) {
      const auto d = add_noise(f, {0.01, seed, dist});
      EXPECT_NEAR(d.delta_abs, 0.01 * f.l2_norm(), 1e-18);
      EXPECT_NEAR((d.samples - f).l2_norm(), d.delta_abs, 1e-12 * d.delta_abs);
      const auto again = add_noise(f, {0.01, seed, dist});
      for (std::size_t k = 0; k <= f.cells(); ++k) EXPECT_EQ(d.samples[k], again.samples[k]);
    }
  }
  const auto a = add_noise(f, {0.05, 1, NoiseDistribution::uniform});
  const auto b = add_noise(f, {0.05, 2, NoiseDistribution::uniform});
  EXPECT_EQ(a.delta_abs, b.delta_abs);
  EXPECT_GT((a.samples - b.samples).l2_norm(), 0.0);
}

TEST(AddNoise, VanishingLevelAndRejections) {
  const auto f = SampledFunction::sample(laplace_rhs, 360);
  const auto d = add_noise(f, {1e-15, 4, NoiseDistribution::uniform});
  EXPECT_LE((d.samples - f).l2_norm(), 1e-15);
  EXPECT_THROW(add_noise(f, {0.0, 1, NoiseDistribution::uniform}), std::invalid_argument);
  EXPECT_THROW(add_noise(f, {1.0, 1, NoiseDistribution::uniform}), std::invalid_argument);
  EXPECT_THROW(add_noise(f, {-0.1, 1, NoiseDistribution::uniform}), std::invalid_argument);
}

TEST(SampleCells, ResolvesEveryPartition) {
  EXPECT_EQ(sample_cells(6), 11520u);
  for (int m = 1; m <= 6; ++m) EXPECT_EQ(sample_cells(6) % taylor_partition(m).intervals(), 0u);
  EXPECT_THROW(sample_cells(0), std::invalid_argument);
}

TEST(AvgError, Examples) {
  const auto t = [](double x) { return x; };
  // The level-0 expansion of t is the zero function.
  EXPECT_NEAR(avg_error(HaarCoefficients::zeros(3), t), 0.495, 1e-15);

  HaarCoefficients c = HaarCoefficients::zeros(2);
  c.values << 0.7, -0.1, 0.3, 0.2;
  const auto approx = [&c](double x) { return c.evaluate(x); };
  EXPECT_EQ(avg_error(c, approx), 0.0);
  EXPECT_NEAR(avg_error(c, [&c](double x) { return c.evaluate(x) + 0.1; }), 0.1, 1e-15);
}

TEST(Scheme, NamesRoundTrip) {
  EXPECT_EQ(parse_scheme(to_string(Scheme::adaptive)), Scheme::adaptive);
  EXPECT_EQ(parse_scheme(to_string(Scheme::fixed)), Scheme::fixed);
  EXPECT_THROW(parse_scheme("both"), std::invalid_argument);
}

TEST(Experiment, SeedDeterminism) {
  const Experiment ex(exact_problem(), SolverConfig::paper(), 4);
  for (auto scheme : {Scheme::adaptive, Scheme::fixed}) {
    const auto a = ex.run(0.01, 7, scheme);
    const auto b = ex.run(0.01, 7, scheme);
    EXPECT_TRUE(a.row.same_result(b.row));
    const auto c = ex.run(0.01, 8, scheme);
    EXPECT_NE(a.row.avg, c.row.avg);
  }
}

TEST(Experiment, RowFieldsAreConsistent) {
  const Experiment ex(exact_problem(), SolverConfig::paper(), 4);
  const auto rec = ex.run(0.05, 1, Scheme::adaptive);
  EXPECT_EQ(rec.row.delta_rel, 0.05);
  EXPECT_EQ(rec.row.seed, 1u);
  EXPECT_EQ(rec.row.m_final, rec.outcome.m_final);
  EXPECT_EQ(rec.row.n_iters, rec.outcome.n_delta);
  EXPECT_EQ(rec.row.G_final, rec.outcome.G_final);
  EXPECT_GE(rec.row.wall_seconds, 0.0);
  EXPECT_NEAR(rec.delta_abs, 0.05 * ex.exact_samples().l2_norm(), 1e-17);
  EXPECT_EQ(rec.row.avg, avg_error(rec.outcome.solution, ex.problem().exact_solution));
  EXPECT_THROW(Experiment(exact_problem(), SolverConfig::paper(), 0), ConfigError);
}

TEST(RunTable, NestingOrder) {
  TableSpec spec;
  spec.levels = {0.05, 0.01};
  spec.seeds = {1, 2};
  const auto rows = run_table(spec);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0].row.delta_rel, 0.05);
  EXPECT_EQ(rows[0].row.scheme, Scheme::adaptive);
  EXPECT_EQ(rows[1].row.scheme, Scheme::fixed);
  EXPECT_EQ(rows[2].row.seed, 2u);
  EXPECT_EQ(rows[4].row.delta_rel, 0.01);
}

TEST(Csv, RoundTripIsBitExact) {
  std::vector<ExperimentRow> rows(3);
  rows[0] = {0.05, Scheme::adaptive, 1, 0.1095123456789012, 2, 7, 0.004242424242424243, 0.0123, StopReason::discrepancy_met};
  rows[1] = {0.0005, Scheme::fixed, 18446744073709551615u, 1.0 / 3.0, 4, 50, 1e-300, 5e-324, StopReason::max_iter};
  rows[2] = {0.01, Scheme::adaptive, 3, std::nextafter(0.25, 1.0), 6, 1, 0.0, 0.0, StopReason::initial_below_threshold};
  std::stringstream ss;
  write_csv(ss, rows);
  const std::string text = ss.str();
  EXPECT_EQ(text.substr(0, text.find('\n')),
            "delta_rel,scheme,seed,avg,m_final,n_iters,G_final,wall_seconds,stop_reason");
  const auto back = read_csv(ss);
  ASSERT_EQ(back.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_TRUE(back[i].same_result(rows[i])) << "row " << i;
    EXPECT_EQ(back[i].wall_seconds, rows[i].wall_seconds);
  }
}

TEST(Csv, RejectsMalformedInput) {
  std::stringstream no_header("0.05,adaptive,1,0.1,2,7,0.004,0.01,discrepancy_met\n");
  EXPECT_THROW(read_csv(no_header), std::invalid_argument);
  std::stringstream short_row(
      "delta_rel,scheme,seed,avg,m_final,n_iters,G_final,wall_seconds,stop_reason\n0.05,adaptive,1\n");
  EXPECT_THROW(read_csv(short_row), std::invalid_argument);
  std::stringstream bad_number(
      "delta_rel,scheme,seed,avg,m_final,n_iters,G_final,wall_seconds,stop_reason\n"
      "0.05,adaptive,1,abc,2,7,0.004,0.01,discrepancy_met\n");
  EXPECT_THROW(read_csv(bad_number), std::invalid_argument);
}

TEST(Summary, MediansPerLevelAndScheme) {
  EXPECT_EQ(median({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median({}), std::invalid_argument);

  std::vector<ExperimentRow> rows;
  rows.push_back({0.05, Scheme::adaptive, 1, 0.1, 2, 5, 0.0, 0.1, StopReason::discrepancy_met});
  rows.push_back({0.05, Scheme::adaptive, 2, 0.3, 3, 6, 0.0, 0.2, StopReason::max_iter});
  rows.push_back({0.05, Scheme::fixed, 1, 0.2, 4, 9, 0.0, 0.3, StopReason::discrepancy_met});
  const auto lines = summarize(rows);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0].scheme, Scheme::adaptive);
  EXPECT_EQ(lines[0].runs, 2u);
  EXPECT_DOUBLE_EQ(lines[0].median_avg, 0.2);
  EXPECT_DOUBLE_EQ(lines[0].median_m, 2.5);
  EXPECT_EQ(lines[0].flagged, 1u);
  EXPECT_EQ(lines[1].flagged, 0u);
  std::ostringstream out;
  print_summary(out, lines);
  EXPECT_NE(out.str().find("5%"), std::string::npos);
}
