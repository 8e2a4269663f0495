#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cpa/bounds.hpp"
#include "cpa/compound.hpp"
#include "cpa/pmf.hpp"

namespace cpa {

enum class Regime { I, II, fixed };

/// Parametric sum: n summands with common p and geometric severities whose
/// parameters are equispaced on [alpha_lo, alpha_hi] (one shared Q when equal).
struct SpecDescriptor {
  std::size_t n = 1;
  double p = 0.5;
  double alpha_lo = 0.2;
  double alpha_hi = 0.2;

  SumSpec build(const TruncationPolicy& policy) const;
};

struct GridPoint {
  std::vector<double> sweep_values;
  SpecDescriptor spec;
};

struct ExperimentConfig {
  std::string name;
  std::vector<std::string> sweep_columns;
  std::vector<GridPoint> grid;
  Regime regime = Regime::fixed;
  TruncationPolicy truncation;
  std::string output_path;

  void validate() const;
};

/// Largest problem sizes the experiment layer accepts.
inline constexpr std::size_t kMaxSummands = 5000;
inline constexpr std::size_t kMaxSupport = 4096;

struct FigureOverrides {
  std::optional<std::size_t> n;
  std::optional<double> lambda;
  std::optional<double> alpha;
  /// Replaces the default sweep values (alpha, lambda or n depending on the figure).
  std::optional<std::vector<double>> sweep;
  TruncationPolicy truncation;
};

/// Configurations for figures 2a, 2b, 2c, 3a and 3b. 2a and 2b share one
/// dataset (the same bounds drawn against alpha). Throws std::invalid_argument
/// for an unknown name.
ExperimentConfig figure_config(const std::string& name, const FigureOverrides& overrides = {});

struct ExperimentRow {
  std::vector<double> sweep_values;
  BoundReport report;
};

/// Evaluates every grid point (in parallel when OpenMP is enabled); rows come
/// back in grid order.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config);

/// CSV column names: sweep columns, then the fixed bound/exact/budget/flags block.
std::vector<std::string> csv_header(const ExperimentConfig& config);
void write_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ExperimentRow>& rows);

/// Shortest round-trip decimal form; "inf"/"-inf"/"nan" for non-finite values.
std::string format_double(double v);

struct SlopeFit {
  std::string bound_name;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
  /// Fewer than 4 points, a non-positive or non-finite bound value, or no spread in n.
  bool degenerate = false;
};

/// Least-squares fit of log(values) against log(n).
SlopeFit fit_log_log(const std::string& name, const std::vector<double>& n, const std::vector<double>& values);

struct RegimeResult {
  Regime regime = Regime::I;
  double parameter = 0.0;
  std::vector<double> n_values;
  std::vector<std::string> bound_names;
  /// values[b][k]: bound b at n_values[k].
  std::vector<std::vector<double>> values;
  std::vector<SlopeFit> fits;
};

/// Regime I: p = parameter / n. Regime II: p = sqrt(parameter / n). Severities
/// are geometrics with alpha_i equispaced on [0.15, 0.25]. Fits slopes for
/// lecam, roos_general, bcl_stein, thm2_tv and thm3_tv.
RegimeResult run_regimes(Regime regime, double parameter, const std::vector<double>& n_values,
                         const TruncationPolicy& policy = {});

struct PropositionRow {
  double p = 0.0;
  std::size_t n = 0;
  double thm1_tv = 0.0;
  double lecam = 0.0;
  double barbour_hall = 0.0;
  std::optional<double> roos_equal;
  bool in_region1 = false;
  bool part1 = false;
  bool in_region2 = false;
  bool part2 = false;
  bool in_region3 = false;
  bool part3 = false;
};

struct PropositionReport {
  std::vector<PropositionRow> rows;
  /// Every part holds at every grid point inside its region.
  bool pass = true;
  std::size_t part1_failures = 0;
  std::size_t part2_failures = 0;
  std::size_t part3_failures = 0;
};

/// Compares the Theorem 1 total-variation bound with Le Cam, Barbour-Hall and
/// Roos (equal Q) on an equal-p grid:
///   part 1: n > 1 / (sqrt(2) p (1 - p))          =>  thm1_tv <= lecam
///   part 2: p < 1/2                              =>  thm1_tv <= barbour_hall
///   part 3: 0.012 < p < 1/2 and the part 1 region => thm1_tv <= min(all three)
PropositionReport run_proposition_checks(const std::vector<double>& p_grid, const std::vector<std::size_t>& n_grid);

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string detail;
};

/// Compact invariant suite used by the `selftest` subcommand.
std::vector<CheckResult> run_selftest();

Regime parse_regime(const std::string& s);
std::string to_string(Regime r);

}  // namespace cpa
