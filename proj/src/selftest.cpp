#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "cpa/bounds.hpp"
#include "cpa/compound.hpp"
#include "cpa/divergence.hpp"
#include "cpa/experiments.hpp"
#include "cpa/information.hpp"

namespace cpa {
namespace {

// Poisson(lambda) from the closed form, truncated where the pmf drops below 1e-17
// past the mode.
Pmf poisson_closed_form(double lambda) {
  std::vector<double> probs;
  double stored = 0.0;
  for (std::size_t k = 0;; ++k) {
    const double kd = static_cast<double>(k);
    const double v = std::exp(-lambda + kd * std::log(lambda) - std::lgamma(kd + 1.0));
    probs.push_back(v);
    stored += v;
    if (kd > lambda && v < 1e-17) break;
  }
  return Pmf(std::move(probs), std::max(0.0, 1.0 - stored));
}

double sup_diff(const Pmf& a, const Pmf& b) {
  double worst = 0.0;
  for (std::size_t k = 0; k < std::max(a.size(), b.size()); ++k) worst = std::max(worst, std::abs(a[k] - b[k]));
  return worst;
}

Pmf random_pmf(std::mt19937_64& rng, std::size_t len) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> v(len);
  double total = 0.0;
  for (auto& x : v) total += (x = u(rng));
  for (auto& x : v) x /= total;
  double s = 0.0;
  for (double x : v) s += x;
  return Pmf(std::move(v), std::max(0.0, 1.0 - s));
}

CheckResult check(std::string name, bool pass, std::string detail) {
  return {std::move(name), pass, std::move(detail)};
}

}  // namespace

std::vector<CheckResult> run_selftest() {
  std::vector<CheckResult> out;
  std::mt19937_64 rng(20240611);

  {
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
      const Pmf a = random_pmf(rng, 1 + rng() % 40);
      const Pmf b = random_pmf(rng, 1 + rng() % 40);
      worst = std::max(worst, sup_diff(convolve(a, b), serial::convolve(a, b)));
    }
    out.push_back(check("convolve matches serial reference", worst <= 1e-12, "sup diff " + format_double(worst)));
  }

  {
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 5.0}) {
      for (const auto& q : {unit_severity(), geometric(0.2), geometric(0.4)}) {
        const Pmf panjer = compound_poisson(lambda, q);
        const Pmf mixed = compound(q, poisson_closed_form(lambda));
        worst = std::max(worst, sup_diff(panjer, mixed));
      }
    }
    out.push_back(check("Panjer recursion matches Poisson mixture", worst <= 1e-10, "sup diff " + format_double(worst)));
  }

  {
    double worst = 0.0;
    for (double p = 0.1; p < 0.95; p += 0.1) {
      const SumSpec single({{p, geometric(0.3)}});
      worst = std::max(worst, std::abs(j1_size_biased(single).value - p * p / (1.0 - p)));
    }
    out.push_back(check("single-summand J1 equals p^2/(1-p)", worst <= 1e-10, "max error " + format_double(worst)));
  }

  {
    double worst = 0.0;
    for (double lambda : {0.5, 2.0, 5.0}) {
      for (double alpha : {0.2, 0.4}) {
        const Severity q = geometric(alpha);
        worst = std::max(worst, j2_katti_panjer(compound_poisson(lambda, q), q, lambda).value);
      }
    }
    out.push_back(check("J2 vanishes on compound Poisson laws", worst <= 1e-8, "max J2 " + format_double(worst)));
  }

  {
    bool ok = true;
    for (int t = 0; t < 50; ++t) {
      const std::size_t len = 1 + rng() % 20;
      const Pmf a = random_pmf(rng, len);
      const Pmf b = random_pmf(rng, len);
      const double tv = total_variation(a, b).value;
      const double kl = relative_entropy(a, b).value;
      ok = ok && tv * tv <= 0.5 * kl + 1e-9;
    }
    out.push_back(check("Pinsker inequality on random pairs", ok, ""));
  }

  {
    const SumSpec spec = SumSpec::equal(100, 0.05, geometric(0.2));
    const auto r = full_report(spec);
    const double floor = r.exact_tv.value - r.exact_tv.error_budget;
    bool ok = r.exact_tv.value >= 0.0 && r.exact_tv.value <= 1.0;
    for (const auto& [name, v] : named_tv_bounds(r.bounds)) ok = ok && (!v || *v >= floor);
    ok = ok && *r.bounds.thm1_kl >= r.exact_kl.value - r.exact_kl.error_budget;
    out.push_back(check("bounds dominate exact TV (n=100, p=0.05, Geom(0.2))", ok,
                        "exact TV " + format_double(r.exact_tv.value)));
  }
  return out;
}

}  // namespace cpa
