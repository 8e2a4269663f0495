#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "cpa/bounds.hpp"
#include "cpa/compound.hpp"
#include "cpa/experiments.hpp"
#include "cpa/information.hpp"
#include "oracles.hpp"

namespace {

using cpa::Pmf;
using cpa::SumSpec;

constexpr double kE = std::numbers::e;

void expect_valid(const cpa::BoundReport& r, const std::string& where) {
  const double floor = r.exact_tv.value - r.exact_tv.error_budget;
  EXPECT_GE(r.exact_tv.value, 0.0) << where;
  EXPECT_LE(r.exact_tv.value, 1.0) << where;
  for (const auto& [name, v] : cpa::named_tv_bounds(r.bounds)) {
    if (v) EXPECT_GE(*v, floor) << name << " at " << where;
  }
  if (r.thm2_j1_tv) EXPECT_GE(*r.thm2_j1_tv, floor) << "thm2_j1 at " << where;
  if (r.j2_tv) EXPECT_GE(*r.j2_tv, floor) << "j2 at " << where;
  if (r.bounds.thm1_kl) EXPECT_GE(*r.bounds.thm1_kl, r.exact_kl.value - r.exact_kl.error_budget) << where;
}

TEST(Stein, GeometricExample) {
  const auto f = cpa::stein_factors(5.0, cpa::geometric(0.2));
  EXPECT_NEAR(f.delta, 1.0 / (5.0 * 0.48), 1e-14);
  const double r = std::sqrt(f.delta);
  EXPECT_NEAR(f.h0, r * (2 - r), 1e-14);
  EXPECT_NEAR(f.h0, 0.874328, 1e-6);
  EXPECT_TRUE(f.monotone_jq);
  EXPECT_EQ(f.h, f.h0);
  ASSERT_TRUE(f.g);
  EXPECT_NEAR(*f.g, std::min(1.0, f.delta * (f.delta / 4 + std::log(2 / f.delta))), 1e-14);
  EXPECT_FALSE(f.vacuous);
}

TEST(Stein, UnitSeverity) {
  const auto f = cpa::stein_factors(4.0, cpa::unit_severity());
  EXPECT_TRUE(f.monotone_jq);
  EXPECT_NEAR(f.delta, 0.25, 1e-15);
  EXPECT_EQ(cpa::stein_factors(0.5, cpa::unit_severity()).h0, 1.0);
}

TEST(Stein, ContinuityAtDeltaOne) {
  // delta = 1 / (lambda Q(1)) for Q = delta_1.
  for (double d : {1.0 - 1e-9, 1.0, 1.0 + 1e-9}) {
    EXPECT_LE(std::abs(cpa::stein_factors(1.0 / d, cpa::unit_severity()).h0 - 1.0), 1e-4);
  }
}

TEST(Stein, InfiniteDeltaWhenGapVanishes) {
  // Q(1) = 2 Q(2) with j Q(j) non-increasing: Q = (1/2, 1/4, 1/4 spread so 3 Q(3) <= 2 Q(2)).
  const cpa::Severity q(Pmf({0.0, 0.5, 0.25, 1.0 / 6, 1.0 / 12}));
  const auto f = cpa::stein_factors(3.0, q);
  EXPECT_TRUE(std::isinf(f.delta));
  EXPECT_EQ(f.h0, 1.0);
  ASSERT_TRUE(f.g);
  EXPECT_EQ(*f.g, 1.0);
}

TEST(Stein, MonotonicityOfGeometrics) {
  for (double alpha : {0.05, 0.2, 0.45, 0.49}) EXPECT_TRUE(cpa::jq_non_increasing(cpa::geometric(alpha))) << alpha;
  for (double alpha : {0.51, 0.6, 0.9}) EXPECT_FALSE(cpa::jq_non_increasing(cpa::geometric(alpha))) << alpha;
}

TEST(Stein, NonMonotoneBranch) {
  const auto q = cpa::geometric(0.7);
  const auto f = cpa::stein_factors(2.0, q);
  EXPECT_FALSE(f.monotone_jq);
  EXPECT_FALSE(f.g);
  EXPECT_NEAR(f.h, std::exp(2.0) * std::min(1.0, 1.0 / (2.0 * 0.3)), 1e-12);

  const auto big = cpa::stein_factors(20.0, q);
  EXPECT_TRUE(big.vacuous);
  const auto huge = cpa::stein_factors(5000.0, q);
  EXPECT_TRUE(std::isfinite(huge.h));
  EXPECT_LE(huge.h, cpa::kMaxStein);
}

TEST(Theorem1, Examples) {
  const SumSpec ten = SumSpec::equal(10, 0.5, cpa::geometric(0.3));
  EXPECT_NEAR(*cpa::bound_thm1(ten), 0.5, 1e-15);
  EXPECT_NEAR(*cpa::bound_thm1_tv(ten), 0.5, 1e-15);

  const SumSpec mixed({{0.1, cpa::geometric(0.2)}, {0.1, cpa::geometric(0.3)}});
  EXPECT_FALSE(cpa::bound_thm1(mixed));
  EXPECT_FALSE(cpa::bound_thm1_tv(mixed));

  const SumSpec twenty = SumSpec::equal(20, 0.1, cpa::geometric(0.3));
  const auto r = cpa::full_report(twenty);
  EXPECT_LE(r.exact_kl.value, *r.bounds.thm1_kl);
}

TEST(Theorem1, EqualPClosedForm) {
  for (double p = 0.02; p < 0.46; p += 0.03) {
    for (std::size_t n : {1u, 7u, 100u, 1000u}) {
      const SumSpec spec = SumSpec::equal(n, p, cpa::unit_severity());
      EXPECT_NEAR(*cpa::bound_thm1_tv(spec), p / std::sqrt(2 * (1 - p)), 1e-12);
    }
  }
}

TEST(Dissimilarity, Examples) {
  EXPECT_EQ(cpa::dissimilarity(SumSpec::equal(4, 0.2, cpa::geometric(0.3))), 0.0);
  const SumSpec two({{0.5, cpa::unit_severity()}, {0.5, cpa::point_severity(2)}});
  EXPECT_NEAR(two.q(), 1.5, 1e-15);
  EXPECT_NEAR(cpa::dissimilarity(two), 1.0, 1e-15);
  std::mt19937_64 rng(73);
  for (int t = 0; t < 20; ++t) EXPECT_GE(cpa::dissimilarity(oracle::build(oracle::random_geometric_spec(rng, 1, 6))), 0.0);
}

TEST(Theorem2, IdenticalSeveritiesReduce) {
  const SumSpec spec = SumSpec::equal(30, 0.1, cpa::geometric(0.25));
  const auto f = cpa::stein_factors(spec.lambda(), spec.mixture_q());
  EXPECT_NEAR(cpa::bound_thm2(spec), f.h * spec.q() * std::sqrt(30 * 0.001 / 0.9), 1e-12);
}

TEST(Theorem2, J1VariantIsSharper) {
  std::mt19937_64 rng(79);
  for (int t = 0; t < 20; ++t) {
    const auto spec = oracle::build(oracle::random_geometric_spec(rng, 1, 8));
    EXPECT_LE(cpa::bound_thm2(spec, true), cpa::bound_thm2(spec, false) + 1e-9);
  }
}

TEST(SeverityK, GeometricAgainstOracleAndRefinement) {
  const auto coarse = cpa::geometric(0.2, {1e-14, 4096});
  const auto fine = cpa::geometric(0.2, {1e-16, 4096});
  const auto kc = cpa::severity_k(coarse);
  const auto kf = cpa::severity_k(fine);
  ASSERT_TRUE(kc && kf);
  EXPECT_NEAR(*kc, *kf, 1e-8);
  EXPECT_NEAR(*kf, static_cast<double>(oracle::severity_k(oracle::to_vec(fine))), 1e-12);
  EXPECT_GE(*kc, 0.0);
  EXPECT_FALSE(cpa::severity_k(cpa::unit_severity()));
  EXPECT_FALSE(cpa::severity_k(cpa::Severity(Pmf({0.0, 0.5, 0.0, 0.5}))));
}

TEST(Theorem3, IdenticalSeverities) {
  const SumSpec spec = SumSpec::equal(50, 0.1, cpa::geometric(0.3));
  const double k = *cpa::severity_k(spec[0].severity);
  const auto f = cpa::stein_factors(spec.lambda(), spec.mixture_q());
  EXPECT_NEAR(*cpa::bound_thm3(spec), f.h * std::sqrt(k * 50 * 0.001), 1e-12);
  EXPECT_FALSE(cpa::bound_thm3(SumSpec::equal(5, 0.1, cpa::unit_severity())));
}

TEST(Theorem3, MatchesJ2BoundForOneSummand) {
  for (double p : {0.1, 0.4}) {
    const auto q = cpa::geometric(0.3);
    const SumSpec one({{p, q}});
    const auto via_j2 = cpa::bound_from_j2(cpa::compound_bernoulli(p, q), q, p);
    ASSERT_TRUE(via_j2);
    // J2 skips points with P(y) <= 1e-12 while K(Q) sums the whole stored severity.
    EXPECT_NEAR(*via_j2, *cpa::bound_thm3(one), 1e-6 * *via_j2);
  }
}

TEST(ClassicalBounds, Examples) {
  EXPECT_NEAR(cpa::bound_lecam(SumSpec::equal(10, 0.1, cpa::geometric(0.2))), 0.1, 1e-15);
  EXPECT_NEAR(*cpa::bound_barbour_hall(SumSpec::equal(100, 0.05, cpa::geometric(0.2))), 0.05, 1e-14);
  const SumSpec small = SumSpec::equal(4, 0.2, cpa::geometric(0.2));
  EXPECT_NEAR(*cpa::bound_barbour_hall(small), cpa::bound_lecam(small), 1e-15);
  const SumSpec mixed({{0.1, cpa::geometric(0.2)}, {0.1, cpa::geometric(0.3)}});
  EXPECT_FALSE(cpa::bound_barbour_hall(mixed));
  EXPECT_FALSE(cpa::bound_roos_equal(mixed));
  EXPECT_NEAR(cpa::bound_lecam(mixed), 0.02, 1e-15);
}

TEST(RoosEqual, Examples) {
  // theta = p for equal p.
  const SumSpec spec = SumSpec::equal(40, 0.05, cpa::geometric(0.2));
  const double r = std::sqrt(0.05);
  const double expected = (3 / (4 * kE) + 7 * r * (3 - 2 * r) / (6 * (1 - r) * (1 - r))) * 0.05;
  EXPECT_NEAR(*cpa::bound_roos_equal(spec), expected, 1e-12);

  const SumSpec tiny = SumSpec::equal(10, 1e-8, cpa::unit_severity());
  EXPECT_NEAR(*cpa::bound_roos_equal(tiny) / 1e-8, 3 / (4 * kE), 1e-3);
}

TEST(RoosG, SeriesAndClosedForm) {
  EXPECT_NEAR(cpa::roos_g(1e-10), 1.0, 1e-9);
  for (double z : {1e-8, 1e-4, 0.01, 0.3, 0.99, 1.0, 1.01, 1.5, 1.98}) {
    EXPECT_NEAR(cpa::roos_g(z), static_cast<double>(oracle::roos_g(z)), 1e-14 * cpa::roos_g(z)) << z;
  }
  EXPECT_THROW(cpa::roos_g(0.0), std::invalid_argument);
}

TEST(RoosGeneral, IdenticalSeveritiesHaveUnitNu) {
  const auto q = cpa::geometric(0.2);
  const SumSpec spec = SumSpec::equal(50, 0.1, q);
  const double lambda = 5.0;
  const double m = std::min({q.mean() * q.mean() / (kE * lambda), 1.0 / (std::pow(2.0, 1.5) * lambda), 1.0});
  const double alpha2 = 50 * static_cast<double>(oracle::roos_g(0.2)) * 0.01 * m;
  EXPECT_NEAR(cpa::bound_roos_general(spec), alpha2 / (1 - 2 * kE * alpha2), 1e-12);
}

TEST(RoosGeneral, NonMonotoneIsInfinite) {
  EXPECT_TRUE(std::isinf(cpa::bound_roos_general(SumSpec::equal(10, 0.1, cpa::geometric(0.7)))));
  // Large p makes the denominator vanish.
  EXPECT_TRUE(std::isinf(cpa::bound_roos_general(SumSpec::equal(3, 0.95, cpa::unit_severity()))));
}

TEST(BclStein, Formula) {
  const SumSpec spec = SumSpec::equal(20, 0.1, cpa::geometric(0.2));
  const auto f = cpa::stein_factors(2.0, spec.mixture_q());
  EXPECT_NEAR(*cpa::bound_bcl_stein(spec), *f.g * 20 * 1.25 * 1.25 * 0.01, 1e-14);
  EXPECT_FALSE(cpa::bound_bcl_stein(SumSpec::equal(10, 0.1, cpa::geometric(0.7))));
}

TEST(BoundFromJ2, Examples) {
  const auto q = cpa::geometric(0.3);
  EXPECT_NEAR(*cpa::bound_from_j2(cpa::compound_poisson(2.0, q), q, 2.0), 0.0, 1e-4);
  EXPECT_FALSE(cpa::bound_from_j2(Pmf({0.5, 0.5}), cpa::unit_severity(), 0.5));
  std::mt19937_64 rng(83);
  for (int t = 0; t < 10; ++t) {
    const auto spec = oracle::build(oracle::random_geometric_spec(rng, 1, 10, 0.4));
    const auto r = cpa::full_report(spec, true);
    ASSERT_TRUE(r.j2_tv);
    EXPECT_GE(*r.j2_tv, r.exact_tv.value - r.exact_tv.error_budget);
  }
}

TEST(FullReport, Examples) {
  expect_valid(cpa::full_report(SumSpec::equal(100, 0.05, cpa::geometric(0.2)), true), "n=100");

  for (double p : {0.1, 0.5, 0.9}) {
    const auto r = cpa::full_report(SumSpec({{p, cpa::geometric(0.3)}}));
    EXPECT_GE(*r.bounds.thm1_kl, r.exact_kl.value);
    EXPECT_GE(p * p / (1 - p), r.exact_kl.value);
  }

  const auto mixed = cpa::full_report(SumSpec({{0.1, cpa::geometric(0.2)}, {0.2, cpa::geometric(0.3)}}));
  const auto& flags = mixed.bounds.flags;
  EXPECT_NE(std::find(flags.begin(), flags.end(), "barbour_hall_na_unequal_severities"), flags.end());
  EXPECT_NE(std::find(flags.begin(), flags.end(), "roos_equal_na"), flags.end());
  EXPECT_NE(std::find(flags.begin(), flags.end(), "roos_general_simplified"), flags.end());
}

TEST(Validity, RandomSpecs) {
  std::mt19937_64 rng(89);
  for (int t = 0; t < 40; ++t) {
    const auto rs = oracle::random_geometric_spec(rng, 1, 30, 0.5);
    expect_valid(cpa::full_report(oracle::build(rs), true), "random spec " + std::to_string(t));
  }
}

TEST(Validity, FigureGrids) {
  for (const char* name : {"2a", "2c", "3a", "3b"}) {
    const auto config = cpa::figure_config(name);
    const auto rows = cpa::run_experiment(config);
    for (std::size_t k = 0; k < rows.size(); ++k) expect_valid(rows[k].report, std::string(name) + " row " + std::to_string(k));
  }
}

TEST(Ordering, RoosGeneralBestOnFigure3a) {
  const auto rows = cpa::run_experiment(cpa::figure_config("3a"));
  for (const auto& row : rows) {
    const auto& b = row.report.bounds;
    EXPECT_LE(b.roos_general, b.lecam);
    EXPECT_LE(b.roos_general, b.thm2_tv);
    if (b.thm3_tv) EXPECT_LE(b.roos_general, *b.thm3_tv);
    if (b.bcl_stein) EXPECT_LE(b.roos_general, *b.bcl_stein);
  }
}

TEST(Ordering, SmallAlphaOnFigure2a) {
  const auto rows = cpa::run_experiment(cpa::figure_config("2a"));
  const auto& b = rows.front().report.bounds;
  EXPECT_LT(*b.roos_equal, b.lecam);
  EXPECT_LT(*b.thm1_tv, b.lecam);
}

}  // namespace
