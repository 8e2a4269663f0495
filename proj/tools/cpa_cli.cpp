// Command-line front end: pmf, bounds, figure, regimes, propcheck, selftest.

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cpa/bounds.hpp"
#include "cpa/compound.hpp"
#include "cpa/experiments.hpp"
#include "cpa/spec_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitInternal = 2;

struct Options {
  std::optional<double> epsilon;
  std::optional<std::size_t> max_support;
  std::string out;
  std::string format;

  std::string spec_path;
  std::string law = "sum";
  bool information = false;

  std::string figure;
  std::optional<std::size_t> n;
  std::optional<double> lambda;
  std::optional<double> alpha;
  std::vector<double> sweep;

  std::string regime = "I";
  double parameter = 5.0;
  std::vector<double> n_values{50, 100, 200, 400, 800, 1600, 3200};

  std::vector<double> p_grid{0.02, 0.05, 0.08, 0.11, 0.14, 0.17, 0.2, 0.23, 0.26,
                             0.29, 0.32, 0.35, 0.38, 0.41, 0.44};
  std::size_t n_max = 1000;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open spec file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Writes to --out when given, otherwise to stdout.
template <class F>
void emit(const Options& o, F&& write) {
  if (o.out.empty()) {
    write(std::cout);
    return;
  }
  std::ofstream file(o.out, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open output file '" + o.out + "'");
  write(file);
}

cpa::TruncationPolicy policy_from(const Options& o) {
  cpa::TruncationPolicy p;
  if (o.epsilon) p.epsilon = *o.epsilon;
  if (o.max_support) p.max_support = *o.max_support;
  p.validate();
  if (p.max_support > cpa::kMaxSupport) {
    throw std::invalid_argument("--max-support exceeds the desk-scale cap of " + std::to_string(cpa::kMaxSupport));
  }
  return p;
}

int cmd_pmf(const Options& o) {
  const auto spec = cpa::parse_sum_spec(read_file(o.spec_path), {o.epsilon, o.max_support});
  const cpa::Pmf law = o.law == "cpo" ? cpa::compound_poisson(spec.lambda(), spec.mixture_q(), spec.policy())
                                      : cpa::sum_distribution(spec);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json") {
      out << cpa::to_json(law).dump(2) << '\n';
      return;
    }
    out << "k,prob\n";
    for (std::size_t k = 0; k < law.size(); ++k) out << k << ',' << cpa::format_double(law[k]) << '\n';
    out << "tail," << cpa::format_double(law.tail_mass()) << '\n';
  });
  return kExitOk;
}

int cmd_bounds(const Options& o) {
  const auto spec = cpa::parse_sum_spec(read_file(o.spec_path), {o.epsilon, o.max_support});
  const auto report = cpa::full_report(spec, o.information);
  emit(o, [&](std::ostream& out) {
    if (o.format == "csv") {
      cpa::ExperimentConfig config;
      cpa::write_csv(out, config, {{{}, report}});
      return;
    }
    out << cpa::to_json(report).dump(2) << '\n';
  });
  return kExitOk;
}

int cmd_figure(const Options& o) {
  cpa::FigureOverrides overrides;
  overrides.n = o.n;
  overrides.lambda = o.lambda;
  overrides.alpha = o.alpha;
  if (!o.sweep.empty()) overrides.sweep = o.sweep;
  overrides.truncation = policy_from(o);
  auto config = cpa::figure_config(o.figure, overrides);
  config.output_path = o.out;
  const auto rows = cpa::run_experiment(config);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json") {
      nlohmann::json doc = nlohmann::json::array();
      for (const auto& row : rows) {
        auto j = cpa::to_json(row.report);
        for (std::size_t c = 0; c < config.sweep_columns.size(); ++c) j[config.sweep_columns[c]] = row.sweep_values[c];
        doc.push_back(j);
      }
      out << doc.dump(2) << '\n';
      return;
    }
    cpa::write_csv(out, config, rows);
  });
  return kExitOk;
}

int cmd_regimes(const Options& o) {
  const auto result = cpa::run_regimes(cpa::parse_regime(o.regime), o.parameter, o.n_values, policy_from(o));
  emit(o, [&](std::ostream& out) {
    if (o.format == "csv") {
      out << "bound,slope,intercept,r_squared,points,degenerate\n";
      for (const auto& f : result.fits) {
        out << f.bound_name << ',' << cpa::format_double(f.slope) << ',' << cpa::format_double(f.intercept) << ','
            << cpa::format_double(f.r_squared) << ',' << f.points << ',' << (f.degenerate ? "true" : "false") << '\n';
      }
      return;
    }
    out << cpa::to_json(result).dump(2) << '\n';
  });
  return kExitOk;
}

int cmd_propcheck(const Options& o) {
  std::vector<std::size_t> n_grid;
  for (std::size_t n = 1; n <= o.n_max; ++n) n_grid.push_back(n);
  const auto report = cpa::run_proposition_checks(o.p_grid, n_grid);
  emit(o, [&](std::ostream& out) {
    if (o.format == "json") {
      out << cpa::to_json(report).dump(2) << '\n';
      return;
    }
    out << "p,n,thm1_tv,lecam,barbour_hall,roos_equal,in_region1,part1,in_region2,part2,in_region3,part3\n";
    const auto b = [](bool v) { return v ? "1" : "0"; };
    for (const auto& r : report.rows) {
      out << cpa::format_double(r.p) << ',' << r.n << ',' << cpa::format_double(r.thm1_tv) << ','
          << cpa::format_double(r.lecam) << ',' << cpa::format_double(r.barbour_hall) << ','
          << (r.roos_equal ? cpa::format_double(*r.roos_equal) : "NA") << ',' << b(r.in_region1) << ','
          << b(r.part1) << ',' << b(r.in_region2) << ',' << b(r.part2) << ',' << b(r.in_region3) << ','
          << b(r.part3) << '\n';
    }
  });
  std::cerr << "propcheck: " << (report.pass ? "all parts hold" : "violations found")
            << " (part1 " << report.part1_failures << ", part2 " << report.part2_failures << ", part3 "
            << report.part3_failures << " failing grid points)\n";
  return kExitOk;
}

int cmd_selftest() {
  bool all = true;
  for (const auto& c : cpa::run_selftest()) {
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name;
    if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
    std::cout << '\n';
    all = all && c.pass;
  }
  return all ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compound Poisson approximation bounds and experiments"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* sub, const std::string& default_format,
                              const std::vector<std::string>& formats) {
    sub->add_option("--epsilon", o.epsilon, "tail-mass budget per constructed pmf (0, 1e-6]");
    sub->add_option("--max-support", o.max_support, "largest stored support index (<= 4096)");
    sub->add_option("--out", o.out, "output path (default: standard output)");
    sub->add_option("--format", o.format, "output format (default " + default_format + ")")
        ->check(CLI::IsMember(formats));
    sub->parse_complete_callback([&o, default_format] {
      if (o.format.empty()) o.format = default_format;
    });
  };

  auto* pmf = app.add_subcommand("pmf", "print the sum law (or its compound Poisson approximation)");
  pmf->add_option("--spec", o.spec_path, "JSON spec file")->required();
  pmf->add_option("--law", o.law, "sum or cpo")->check(CLI::IsMember({"sum", "cpo"}));
  add_common(pmf, "csv", {"csv", "json"});

  auto* bounds = app.add_subcommand("bounds", "every bound and the exact distances for one spec");
  bounds->add_option("--spec", o.spec_path, "JSON spec file")->required();
  bounds->add_flag("--information", o.information, "also evaluate the J1- and J2-based bounds");
  add_common(bounds, "json", {"json", "csv"});

  auto* figure = app.add_subcommand("figure", "reproduce a bound-comparison figure as CSV");
  figure->add_option("--name", o.figure, "2a, 2b, 2c, 3a or 3b")->required();
  figure->add_option("--n", o.n, "number of summands (figures 2a-2c)");
  figure->add_option("--lambda", o.lambda, "lambda (2a/2b, 3a) or mu (3b)");
  figure->add_option("--alpha", o.alpha, "geometric parameter (2c)");
  figure->add_option("--sweep", o.sweep, "replacement sweep values")->delimiter(',');
  add_common(figure, "csv", {"csv", "json"});

  auto* regimes = app.add_subcommand("regimes", "log-log slopes of the bounds in regime I or II");
  regimes->add_option("--regime", o.regime, "I (p = lambda/n) or II (p = sqrt(mu/n))");
  regimes->add_option("--param", o.parameter, "lambda (regime I) or mu (regime II)");
  regimes->add_option("--n", o.n_values, "n values")->delimiter(',');
  add_common(regimes, "json", {"json", "csv"});

  auto* propcheck = app.add_subcommand("propcheck", "check when the Theorem 1 bound beats the classical ones");
  propcheck->add_option("--p", o.p_grid, "p grid")->delimiter(',');
  propcheck->add_option("--n-max", o.n_max, "largest n (grid is 1..n-max)");
  add_common(propcheck, "csv", {"csv", "json"});

  auto* selftest = app.add_subcommand("selftest", "run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (pmf->parsed()) return cmd_pmf(o);
    if (bounds->parsed()) return cmd_bounds(o);
    if (figure->parsed()) return cmd_figure(o);
    if (regimes->parsed()) return cmd_regimes(o);
    if (propcheck->parsed()) return cmd_propcheck(o);
    if (selftest->parsed()) return cmd_selftest();
  } catch (const cpa::SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
