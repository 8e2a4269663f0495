#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "cpa/experiments.hpp"

namespace {

std::string csv_of(const cpa::ExperimentConfig& c) {
  std::ostringstream out;
  cpa::write_csv(out, c, cpa::run_experiment(c));
  return out.str();
}

TEST(FigureConfig, Defaults) {
  const auto a = cpa::figure_config("2a");
  ASSERT_EQ(a.grid.size(), 9u);
  EXPECT_EQ(a.sweep_columns, std::vector<std::string>{"alpha"});
  EXPECT_NEAR(a.grid.front().spec.alpha_lo, 0.05, 1e-15);
  EXPECT_NEAR(a.grid.back().spec.alpha_lo, 0.45, 1e-15);
  EXPECT_EQ(a.grid.front().spec.n, 100u);
  EXPECT_NEAR(a.grid.front().spec.p, 0.05, 1e-15);

  const auto c = cpa::figure_config("2c");
  ASSERT_EQ(c.grid.size(), 20u);
  EXPECT_NEAR(c.grid.back().spec.p, 0.2, 1e-15);
  EXPECT_EQ(c.grid.back().spec.alpha_lo, 0.2);

  const auto three_a = cpa::figure_config("3a");
  const auto three_b = cpa::figure_config("3b");
  ASSERT_EQ(three_a.grid.size(), 6u);
  EXPECT_EQ(three_a.grid.front().spec.n, 25u);
  EXPECT_NEAR(three_a.grid.front().spec.p, 0.2, 1e-15);
  EXPECT_NEAR(three_b.grid.front().spec.p, std::sqrt(0.5 / 25), 1e-15);
  EXPECT_EQ(three_a.grid.front().spec.alpha_lo, 0.15);
  EXPECT_EQ(three_a.grid.front().spec.alpha_hi, 0.25);
  EXPECT_EQ(three_a.regime, cpa::Regime::I);
  EXPECT_EQ(three_b.regime, cpa::Regime::II);
}

TEST(FigureConfig, Figure2bSharesFigure2a) {
  auto b = cpa::figure_config("2b");
  b.name = "2a";
  EXPECT_EQ(csv_of(b), csv_of(cpa::figure_config("2a")));
}

TEST(FigureConfig, Errors) {
  EXPECT_THROW(cpa::figure_config("4"), std::invalid_argument);
  cpa::FigureOverrides big;
  big.n = 6000;
  EXPECT_THROW(cpa::figure_config("2a", big), std::invalid_argument);
  cpa::FigureOverrides bad_p;
  bad_p.lambda = 200.0;
  EXPECT_THROW(cpa::figure_config("2a", bad_p), std::invalid_argument);
  cpa::FigureOverrides support;
  support.truncation.max_support = 5000;
  EXPECT_THROW(cpa::figure_config("2a", support), std::invalid_argument);
  cpa::FigureOverrides frac;
  frac.sweep = std::vector<double>{25.5};
  EXPECT_THROW(cpa::figure_config("3a", frac), std::invalid_argument);
}

TEST(FigureConfig, Overrides) {
  cpa::FigureOverrides o;
  o.n = 50;
  o.sweep = std::vector<double>{0.1, 0.3};
  const auto c = cpa::figure_config("2a", o);
  ASSERT_EQ(c.grid.size(), 2u);
  EXPECT_NEAR(c.grid[1].spec.p, 0.1, 1e-15);
  EXPECT_EQ(c.grid[1].spec.alpha_lo, 0.3);
}

TEST(SpecDescriptor, EquispacedAlphas) {
  const cpa::SpecDescriptor d{5, 0.1, 0.15, 0.25};
  const auto spec = d.build({});
  ASSERT_EQ(spec.size(), 5u);
  EXPECT_NEAR(spec[0].severity[1], 0.85, 1e-15);
  EXPECT_NEAR(spec[2].severity[1], 0.80, 1e-15);
  EXPECT_NEAR(spec[4].severity[1], 0.75, 1e-15);
}

TEST(Csv, HeaderAndRows) {
  const auto c = cpa::figure_config("2a");
  const std::string csv = csv_of(c);
  std::istringstream in(csv);
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header,
            "alpha,thm1_kl,thm1_tv,thm2_tv,thm3_tv,lecam,barbour_hall,roos_equal,roos_general,bcl_stein,"
            "exact_tv,exact_kl,tv_budget,flags");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) {
    ++lines;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 13) << line;
  }
  EXPECT_EQ(lines, 9u);

  const auto three = cpa::figure_config("3a");
  EXPECT_EQ(cpa::csv_header(three).front(), "n");
  EXPECT_EQ(cpa::csv_header(three)[1], "p");
  EXPECT_NE(csv_of(three).find(",NA,"), std::string::npos);
}

TEST(Csv, Deterministic) {
  const auto c = cpa::figure_config("2a");
  EXPECT_EQ(csv_of(c), csv_of(c));
}

TEST(FormatDouble, RoundTrip) {
  for (double v : {0.1, 1.0 / 3.0, 1e-300, 12345.678, 0.0}) EXPECT_EQ(std::stod(cpa::format_double(v)), v);
  EXPECT_EQ(cpa::format_double(std::numeric_limits<double>::infinity()), "inf");
  EXPECT_EQ(cpa::format_double(std::nan("")), "nan");
}

TEST(SlopeFit, ExactPowerLaw) {
  std::vector<double> n{10, 20, 40, 80, 160};
  std::vector<double> v;
  for (double x : n) v.push_back(3.0 * std::pow(x, -0.75));
  const auto f = cpa::fit_log_log("x", n, v);
  EXPECT_FALSE(f.degenerate);
  EXPECT_NEAR(f.slope, -0.75, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-12);
}

TEST(SlopeFit, Degenerate) {
  EXPECT_TRUE(cpa::fit_log_log("x", {1, 2, 3}, {1, 2, 3}).degenerate);
  EXPECT_TRUE(cpa::fit_log_log("x", {1, 2, 3, 4}, {1, 0, 3, 4}).degenerate);
  EXPECT_TRUE(cpa::fit_log_log("x", {2, 2, 2, 2}, {1, 2, 3, 4}).degenerate);
  EXPECT_TRUE(cpa::fit_log_log("x", {1, 2, 3, 4}, {1, 2, INFINITY, 4}).degenerate);
}

const cpa::SlopeFit& fit(const cpa::RegimeResult& r, const std::string& name) {
  for (const auto& f : r.fits) {
    if (f.bound_name == name) return f;
  }
  throw std::out_of_range(name);
}

TEST(Regimes, TableSlopes) {
  const std::vector<double> n{50, 100, 200, 400, 800, 1600, 3200};
  const auto one = cpa::run_regimes(cpa::Regime::I, 5.0, n);
  for (const char* name : {"lecam", "roos_general", "bcl_stein", "thm3_tv"}) {
    EXPECT_NEAR(fit(one, name).slope, -1.0, 0.15) << name;
    EXPECT_GE(fit(one, name).r_squared, 0.98) << name;
  }
  EXPECT_NEAR(fit(one, "thm2_tv").slope, 0.0, 0.15);

  const auto two = cpa::run_regimes(cpa::Regime::II, 0.5, n);
  EXPECT_NEAR(fit(two, "lecam").slope, 0.0, 0.15);
  EXPECT_NEAR(fit(two, "roos_general").slope, -0.5, 0.15);
  EXPECT_NEAR(fit(two, "thm3_tv").slope, -0.5, 0.15);
  EXPECT_NEAR(fit(two, "thm2_tv").slope, 0.25, 0.15);
  for (const char* name : {"roos_general", "thm3_tv"}) EXPECT_GE(fit(two, name).r_squared, 0.98) << name;
  // In regime II the thm2 bound mixes n^(-1/2) and n^(1/4) terms, so the
  // pure power law only fits once the growing term dominates.
  const std::vector<double> large(n.begin() + 3, n.end());
  const auto late = cpa::run_regimes(cpa::Regime::II, 0.5, large);
  EXPECT_NEAR(fit(late, "thm2_tv").slope, 0.25, 0.15);
  EXPECT_GE(fit(late, "thm2_tv").r_squared, 0.98);
}

TEST(Regimes, Errors) {
  EXPECT_THROW(cpa::run_regimes(cpa::Regime::fixed, 5.0, {50, 100, 200, 400}), std::invalid_argument);
  EXPECT_THROW(cpa::run_regimes(cpa::Regime::I, -1.0, {50, 100, 200, 400}), std::invalid_argument);
  EXPECT_THROW(cpa::run_regimes(cpa::Regime::I, 5.0, {50, 100, 200, 9000}), std::invalid_argument);
  EXPECT_EQ(cpa::parse_regime("II"), cpa::Regime::II);
  EXPECT_THROW(cpa::parse_regime("III"), std::invalid_argument);
}

TEST(Proposition, Examples) {
  const auto r = cpa::run_proposition_checks({0.2}, {100});
  ASSERT_EQ(r.rows.size(), 1u);
  EXPECT_TRUE(r.rows[0].in_region1 && r.rows[0].in_region2 && r.rows[0].in_region3);
  EXPECT_TRUE(r.rows[0].part1 && r.rows[0].part2 && r.rows[0].part3);

  const auto small = cpa::run_proposition_checks({0.005}, {1000});
  EXPECT_FALSE(small.rows[0].in_region3);

  const double p = 0.1;
  const auto boundary = static_cast<std::size_t>(std::ceil(1.0 / (std::sqrt(2.0) * p * (1 - p))));
  const auto b = cpa::run_proposition_checks({p}, {boundary});
  EXPECT_TRUE(b.rows[0].in_region1);
  EXPECT_TRUE(b.rows[0].part1);
}

TEST(Proposition, PartsOneAndThreeHoldOnGrid) {
  std::vector<double> ps;
  for (double p = 0.02; p < 0.46; p += 0.03) ps.push_back(p);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 1000; ++n) ns.push_back(n);
  const auto r = cpa::run_proposition_checks(ps, ns);
  EXPECT_EQ(r.part1_failures, 0u);
  EXPECT_EQ(r.part3_failures, 0u);
}

// Part 2 compares p / sqrt(2 (1 - p)) with min{1, 1 / lambda} n p^2. For
// lambda >= 1 it reduces to p < 1/2; for lambda < 1 it additionally needs
// n >= 1 / (p sqrt(2 (1 - p))), so it is violated at small n.
TEST(Proposition, PartTwoHoldsExactlyAboveItsThreshold) {
  std::vector<double> ps;
  for (double p = 0.02; p < 0.46; p += 0.03) ps.push_back(p);
  std::vector<std::size_t> ns;
  for (std::size_t n = 1; n <= 1000; ++n) ns.push_back(n);
  const auto r = cpa::run_proposition_checks(ps, ns);
  std::size_t violations = 0;
  for (const auto& row : r.rows) {
    const double threshold = 1.0 / (row.p * std::sqrt(2 * (1 - row.p)));
    const bool expected = static_cast<double>(row.n) >= threshold * (1 - 1e-12);
    EXPECT_EQ(row.part2, expected) << "p=" << row.p << " n=" << row.n;
    if (!row.part2) ++violations;
  }
  EXPECT_EQ(violations, r.part2_failures);
  EXPECT_GT(violations, 0u);
}

TEST(Proposition, Errors) {
  EXPECT_THROW(cpa::run_proposition_checks({1.2}, {10}), std::invalid_argument);
  EXPECT_THROW(cpa::run_proposition_checks({0.2}, {0}), std::invalid_argument);
}

TEST(Selftest, AllChecksPass) {
  for (const auto& c : cpa::run_selftest()) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
}

}  // namespace
