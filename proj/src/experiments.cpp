#include "cpa/experiments.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace cpa {
namespace {

constexpr double kFigure3AlphaLo = 0.15;
constexpr double kFigure3AlphaHi = 0.25;

void write_optional(std::ostream& out, const std::optional<double>& v) {
  out << (v ? format_double(*v) : std::string("NA"));
}

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

template <class F>
void parallel_for(std::size_t count, F&& body) {
  std::vector<std::exception_ptr> errors(count);
  const auto total = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 1)
  for (long long k = 0; k < total; ++k) {
    try {
      body(static_cast<std::size_t>(k));
    } catch (...) {
      errors[static_cast<std::size_t>(k)] = std::current_exception();
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

SumSpec SpecDescriptor::build(const TruncationPolicy& policy) const {
  if (n == 0) throw std::invalid_argument("spec descriptor needs n >= 1");
  if (alpha_lo == alpha_hi || n == 1) return SumSpec::equal(n, p, geometric(alpha_lo, policy), policy);
  std::vector<SummandSpec> summands;
  summands.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n - 1);
    summands.push_back({p, geometric(alpha_lo + (alpha_hi - alpha_lo) * t, policy)});
  }
  return SumSpec(std::move(summands), policy);
}

void ExperimentConfig::validate() const {
  if (grid.empty()) throw std::invalid_argument("experiment '" + name + "' has an empty grid");
  truncation.validate();
  if (truncation.max_support > kMaxSupport) {
    throw std::invalid_argument("max_support " + std::to_string(truncation.max_support) +
                                " exceeds the desk-scale cap of " + std::to_string(kMaxSupport) +
                                "; loosen epsilon or shrink the problem instead");
  }
  for (const auto& g : grid) {
    if (g.spec.n == 0 || g.spec.n > kMaxSummands) {
      throw std::invalid_argument("grid point with n = " + std::to_string(g.spec.n) +
                                  " is outside 1.." + std::to_string(kMaxSummands));
    }
    if (!(g.spec.p > 0.0 && g.spec.p < 1.0)) {
      throw std::invalid_argument("grid point with p = " + format_double(g.spec.p) +
                                  " is outside (0, 1)");
    }
    if (g.sweep_values.size() != sweep_columns.size()) {
      throw std::logic_error("grid point sweep values do not match the sweep columns");
    }
  }
}

ExperimentConfig figure_config(const std::string& name, const FigureOverrides& o) {
  ExperimentConfig c;
  c.name = name;
  c.truncation = o.truncation;
  if (name == "2a" || name == "2b") {
    const std::size_t n = o.n.value_or(100);
    const double lambda = o.lambda.value_or(5.0);
    std::vector<double> alphas;
    for (int k = 1; k <= 9; ++k) alphas.push_back(0.05 * k);
    c.sweep_columns = {"alpha"};
    for (double a : o.sweep.value_or(alphas)) {
      c.grid.push_back({{a}, {n, lambda / static_cast<double>(n), a, a}});
    }
  } else if (name == "2c") {
    const std::size_t n = o.n.value_or(100);
    const double alpha = o.alpha.value_or(0.2);
    std::vector<double> lambdas;
    for (int k = 1; k <= 20; ++k) lambdas.push_back(k);
    c.sweep_columns = {"lambda"};
    for (double l : o.sweep.value_or(lambdas)) {
      c.grid.push_back({{l}, {n, l / static_cast<double>(n), alpha, alpha}});
    }
  } else if (name == "3a" || name == "3b") {
    const bool regime_one = name == "3a";
    c.regime = regime_one ? Regime::I : Regime::II;
    const double param = o.lambda.value_or(regime_one ? 5.0 : 0.5);
    c.sweep_columns = {"n", "p"};
    for (double nv : o.sweep.value_or(std::vector<double>{25, 50, 100, 200, 400, 800})) {
      if (!(nv >= 1.0) || nv != std::floor(nv)) {
        throw std::invalid_argument("figure " + name + " sweeps n; got " + format_double(nv));
      }
      const auto n = static_cast<std::size_t>(nv);
      const double p = regime_one ? param / nv : std::sqrt(param / nv);
      c.grid.push_back({{nv, p}, {n, p, kFigure3AlphaLo, kFigure3AlphaHi}});
    }
  } else {
    throw std::invalid_argument("unknown figure '" + name + "' (expected 2a, 2b, 2c, 3a or 3b)");
  }
  c.validate();
  return c;
}

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<ExperimentRow> rows(config.grid.size());
  parallel_for(config.grid.size(), [&](std::size_t k) {
    const auto& point = config.grid[k];
    rows[k] = {point.sweep_values, full_report(point.spec.build(config.truncation))};
  });
  return rows;
}

std::vector<std::string> csv_header(const ExperimentConfig& config) {
  std::vector<std::string> h = config.sweep_columns;
  for (const char* c : {"thm1_kl", "thm1_tv", "thm2_tv", "thm3_tv", "lecam", "barbour_hall", "roos_equal",
                        "roos_general", "bcl_stein", "exact_tv", "exact_kl", "tv_budget", "flags"}) {
    h.emplace_back(c);
  }
  return h;
}

void write_csv(std::ostream& out, const ExperimentConfig& config, const std::vector<ExperimentRow>& rows) {
  const auto header = csv_header(config);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (double v : row.sweep_values) out << format_double(v) << ',';
    const auto& b = row.report.bounds;
    write_optional(out, b.thm1_kl);
    out << ',';
    write_optional(out, b.thm1_tv);
    out << ',' << format_double(b.thm2_tv) << ',';
    write_optional(out, b.thm3_tv);
    out << ',' << format_double(b.lecam) << ',';
    write_optional(out, b.barbour_hall);
    out << ',';
    write_optional(out, b.roos_equal);
    out << ',' << format_double(b.roos_general) << ',';
    write_optional(out, b.bcl_stein);
    out << ',' << format_double(row.report.exact_tv.value) << ',' << format_double(row.report.exact_kl.value)
        << ',' << format_double(row.report.exact_tv.error_budget) << ',' << join_flags(b.flags) << '\n';
  }
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

SlopeFit fit_log_log(const std::string& name, const std::vector<double>& n, const std::vector<double>& values) {
  SlopeFit fit;
  fit.bound_name = name;
  fit.points = n.size();
  if (n.size() != values.size() || n.size() < 4) {
    fit.degenerate = true;
    return fit;
  }
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t k = 0; k < n.size(); ++k) {
    if (!(values[k] > 0.0) || !std::isfinite(values[k]) || !(n[k] > 0.0)) {
      fit.degenerate = true;
      return fit;
    }
    x.push_back(std::log(n[k]));
    y.push_back(std::log(values[k]));
  }
  const double m = static_cast<double>(x.size());
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    mx += x[k];
    my += y[k];
  }
  mx /= m;
  my /= m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
    syy += (y[k] - my) * (y[k] - my);
  }
  if (sxx == 0.0) {
    fit.degenerate = true;
    return fit;
  }
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return fit;
}

RegimeResult run_regimes(Regime regime, double parameter, const std::vector<double>& n_values,
                         const TruncationPolicy& policy) {
  if (regime == Regime::fixed) throw std::invalid_argument("regime must be I or II");
  if (!(parameter > 0.0)) throw std::invalid_argument("regime parameter must be positive");
  RegimeResult r;
  r.regime = regime;
  r.parameter = parameter;
  r.n_values = n_values;
  r.bound_names = {"lecam", "roos_general", "bcl_stein", "thm2_tv", "thm3_tv"};
  std::vector<BoundSet> sets(n_values.size());
  for (double nv : n_values) {
    if (!(nv >= 1.0) || nv > static_cast<double>(kMaxSummands) || nv != std::floor(nv)) {
      throw std::invalid_argument("regime n values must be integers in 1.." + std::to_string(kMaxSummands));
    }
  }
  parallel_for(n_values.size(), [&](std::size_t k) {
    const double nv = n_values[k];
    const double p = regime == Regime::I ? parameter / nv : std::sqrt(parameter / nv);
    const SpecDescriptor d{static_cast<std::size_t>(nv), p, kFigure3AlphaLo, kFigure3AlphaHi};
    sets[k] = compute_bounds(d.build(policy));
  });
  const double nan = std::numeric_limits<double>::quiet_NaN();
  r.values.assign(r.bound_names.size(), std::vector<double>(n_values.size(), nan));
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const auto& b = sets[k];
    r.values[0][k] = b.lecam;
    r.values[1][k] = b.roos_general;
    r.values[2][k] = b.bcl_stein.value_or(nan);
    r.values[3][k] = b.thm2_tv;
    r.values[4][k] = b.thm3_tv.value_or(nan);
  }
  for (std::size_t b = 0; b < r.bound_names.size(); ++b) {
    r.fits.push_back(fit_log_log(r.bound_names[b], n_values, r.values[b]));
  }
  return r;
}

PropositionReport run_proposition_checks(const std::vector<double>& p_grid, const std::vector<std::size_t>& n_grid) {
  PropositionReport report;
  for (double p : p_grid) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("proposition p grid must lie in (0, 1)");
    for (std::size_t n : n_grid) {
      if (n < 1) throw std::invalid_argument("proposition n grid must be >= 1");
      PropositionRow row;
      row.p = p;
      row.n = n;
      report.rows.push_back(row);
    }
  }
  const Severity unit = unit_severity();
  parallel_for(report.rows.size(), [&](std::size_t k) {
    auto& row = report.rows[k];
    const SumSpec spec = SumSpec::equal(row.n, row.p, unit);
    row.thm1_tv = *bound_thm1_tv(spec);
    row.lecam = bound_lecam(spec);
    row.barbour_hall = *bound_barbour_hall(spec);
    row.roos_equal = bound_roos_equal(spec);
    const double threshold = 1.0 / (std::sqrt(2.0) * row.p * (1.0 - row.p));
    row.in_region1 = static_cast<double>(row.n) > threshold;
    row.in_region2 = row.p < 0.5;
    row.in_region3 = row.p > 0.012 && row.p < 0.5 && row.in_region1;
    row.part1 = row.thm1_tv <= row.lecam;
    row.part2 = row.thm1_tv <= row.barbour_hall;
    const double roos = row.roos_equal.value_or(std::numeric_limits<double>::infinity());
    row.part3 = row.thm1_tv <= std::min({row.lecam, row.barbour_hall, roos});
  });
  for (const auto& row : report.rows) {
    if (row.in_region1 && !row.part1) ++report.part1_failures;
    if (row.in_region2 && !row.part2) ++report.part2_failures;
    if (row.in_region3 && !row.part3) ++report.part3_failures;
  }
  report.pass = report.part1_failures + report.part2_failures + report.part3_failures == 0;
  return report;
}

Regime parse_regime(const std::string& s) {
  if (s == "I" || s == "i" || s == "1") return Regime::I;
  if (s == "II" || s == "ii" || s == "2") return Regime::II;
  throw std::invalid_argument("unknown regime '" + s + "' (expected I or II)");
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::I: return "I";
    case Regime::II: return "II";
    case Regime::fixed: return "fixed";
  }
  return "fixed";
}

}  // namespace cpa
