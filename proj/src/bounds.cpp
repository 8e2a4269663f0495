#include "cpa/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "cpa/information.hpp"

namespace cpa {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeverityTolerance = 1e-12;

double sum_p3_over_1mp(const SumSpec& spec) {
  double acc = 0.0;
  for (const auto& s : spec.summands()) acc += s.p * s.p * s.p / (1.0 - s.p);
  return acc;
}

double sum_p2(const SumSpec& spec) {
  double acc = 0.0;
  for (const auto& s : spec.summands()) acc += s.p * s.p;
  return acc;
}

bool severity_full_support(const Severity& q) {
  if (!(q.tail_mass() > 0.0)) return false;
  for (std::size_t y = 1; y <= q.max_index(); ++y) {
    if (!(q[y] > 0.0)) return false;
  }
  return true;
}

bool same_severity(const Severity& a, const Severity& b) {
  if (&a == &b) return true;
  const std::size_t n = std::max(a.max_index(), b.max_index());
  for (std::size_t k = 0; k <= n; ++k) {
    if (std::abs(a[k] - b[k]) > kSeverityTolerance) return false;
  }
  return true;
}

}  // namespace

bool jq_non_increasing(const Severity& q) {
  for (std::size_t j = 1; j < q.max_index(); ++j) {
    const double here = static_cast<double>(j) * q[j];
    const double next = static_cast<double>(j + 1) * q[j + 1];
    if (next > here * (1.0 + 1e-12)) return false;
  }
  return true;
}

SteinFactors stein_factors(double lambda, const Severity& q) {
  if (!(lambda > 0.0)) throw std::invalid_argument("Stein factors need lambda > 0");
  SteinFactors f;
  f.monotone_jq = jq_non_increasing(q);
  const double gap = q[1] - 2.0 * q[2];
  if (f.monotone_jq && gap < -1e-12 * q[1]) {
    throw std::logic_error("Q(1) < 2 Q(2) contradicts a non-increasing j Q(j)");
  }
  f.delta = gap > 0.0 ? 1.0 / (lambda * gap) : kInf;
  const double root = std::sqrt(f.delta);
  f.h0 = f.delta >= 1.0 ? 1.0 : root * (2.0 - root);

  if (f.monotone_jq) {
    f.h = f.h0;
    if (std::isinf(f.delta)) {
      f.g = 1.0;
    } else {
      const double log_plus = std::max(std::log(2.0 / f.delta), 0.0);
      f.g = std::min(1.0, f.delta * (f.delta / 4.0 + log_plus));
    }
  } else {
    const double shrink = q[1] > 0.0 ? std::min(1.0, 1.0 / (lambda * q[1])) : 1.0;
    const double log_h = lambda + std::log(shrink);
    f.h = std::exp(std::min(log_h, std::log(kMaxStein)));
  }
  f.vacuous = f.h > kVacuousStein;
  return f;
}

bool identical_severities(const SumSpec& spec) {
  const auto& first = spec[0].severity;
  return std::all_of(spec.summands().begin(), spec.summands().end(),
                     [&](const SummandSpec& s) { return same_severity(first, s.severity); });
}

std::optional<double> bound_thm1(const SumSpec& spec) {
  if (!identical_severities(spec)) return std::nullopt;
  return sum_p3_over_1mp(spec) / spec.lambda();
}

std::optional<double> bound_thm1_tv(const SumSpec& spec) {
  const auto kl = bound_thm1(spec);
  if (!kl) return std::nullopt;
  return std::sqrt(*kl / 2.0);
}

double dissimilarity(const SumSpec& spec) {
  const auto& mix = spec.mixture_q();
  const double q = spec.q();
  double acc = 0.0;
  for (const auto& s : spec.summands()) {
    const std::size_t last = std::max(s.severity.max_index(), mix.max_index());
    double inner = 0.0;
    for (std::size_t j = 1; j <= last; ++j) {
      inner += static_cast<double>(j) * std::abs(s.severity[j] - mix[j]);
    }
    acc += s.p / q * inner;
  }
  return acc;
}

double bound_thm2(const SumSpec& spec, bool use_j1) {
  const auto stein = stein_factors(spec.lambda(), spec.mixture_q());
  const double info_term = use_j1 ? std::sqrt(spec.lambda() * j1_size_biased(spec).value)
                                  : std::sqrt(sum_p3_over_1mp(spec));
  return stein.h * spec.q() * (info_term + dissimilarity(spec));
}

std::optional<double> severity_k(const Severity& q) {
  if (!severity_full_support(q)) return std::nullopt;
  const std::size_t last = q.max_index();
  const Pmf twice = convolve(q.pmf(), q.pmf(), last);
  double acc = 0.0;
  for (std::size_t y = 1; y <= last; ++y) {
    const double ratio = twice[y] / (2.0 * q[y]) - 1.0;
    const double yy = static_cast<double>(y);
    acc += q[y] * yy * yy * ratio * ratio;
  }
  return acc;
}

std::optional<double> bound_thm3(const SumSpec& spec) {
  double acc = 0.0;
  // Consecutive summands usually share a severity; reuse K when they do.
  const Severity* previous = nullptr;
  double previous_k = 0.0;
  for (const auto& s : spec.summands()) {
    if (previous == nullptr || !same_severity(*previous, s.severity)) {
      const auto k = severity_k(s.severity);
      if (!k) return std::nullopt;
      previous = &s.severity;
      previous_k = *k;
    }
    acc += s.p * s.p * s.p * previous_k;
  }
  return stein_factors(spec.lambda(), spec.mixture_q()).h * std::sqrt(acc);
}

double bound_lecam(const SumSpec& spec) { return sum_p2(spec); }

std::optional<double> bound_barbour_hall(const SumSpec& spec) {
  if (!identical_severities(spec)) return std::nullopt;
  return std::min(1.0, 1.0 / spec.lambda()) * sum_p2(spec);
}

std::optional<double> bound_roos_equal(const SumSpec& spec) {
  if (!identical_severities(spec)) return std::nullopt;
  const double theta = sum_p2(spec) / spec.lambda();
  if (!(theta < 1.0)) return std::nullopt;
  const double r = std::sqrt(theta);
  const double lead = 3.0 / (4.0 * std::numbers::e);
  return (lead + 7.0 * r * (3.0 - 2.0 * r) / (6.0 * (1.0 - r) * (1.0 - r))) * theta;
}

double roos_g(double z) {
  if (!(z > 0.0)) throw std::invalid_argument("roos_g needs z > 0");
  if (z < 1.0) {
    // 2 sum_{k >= 2} (k - 1) z^{k-2} / k!, avoiding the cancellation in the closed form.
    double term = 1.0 / 2.0;  // z^{k-2} / k! at k = 2
    double acc = 0.0;
    for (int k = 2; k < 30; ++k) {
      acc += (k - 1) * term;
      term *= z / (k + 1);
    }
    return 2.0 * acc;
  }
  return 2.0 / (z * z) * (z * std::exp(z) - std::expm1(z));
}

double bound_roos_general(const SumSpec& spec) {
  const auto& mix = spec.mixture_q();
  if (!jq_non_increasing(mix)) return kInf;
  const double lambda = spec.lambda();
  const double e = std::numbers::e;
  double alpha2 = 0.0;
  for (const auto& s : spec.summands()) {
    double nu = 0.0;
    for (std::size_t y = 1; y <= s.severity.max_index(); ++y) {
      const double qi = s.severity[y];
      if (qi == 0.0) continue;
      if (mix[y] == 0.0) {
        if (qi > 1e-15) {
          nu = kInf;
          break;
        }
        continue;
      }
      nu += qi * qi / mix[y];
    }
    const double qi_mean = s.severity.mean();
    const double m = std::min({qi_mean * qi_mean / (e * lambda), nu / (std::pow(2.0, 1.5) * lambda), 1.0});
    alpha2 += roos_g(2.0 * s.p) * s.p * s.p * m;
  }
  const double denom = 1.0 - 2.0 * e * alpha2;
  return denom > 0.0 ? alpha2 / denom : kInf;
}

std::optional<double> bound_bcl_stein(const SumSpec& spec) {
  const auto stein = stein_factors(spec.lambda(), spec.mixture_q());
  if (!stein.g) return std::nullopt;
  double acc = 0.0;
  for (const auto& s : spec.summands()) {
    const double qi = s.severity.mean();
    acc += qi * qi * s.p * s.p;
  }
  return *stein.g * acc;
}

std::optional<double> bound_from_j2(const Pmf& p, const Severity& q, double lambda) {
  const auto j2 = j2_katti_panjer(p, q, lambda);
  if (!j2.support_full) return std::nullopt;
  return stein_factors(lambda, q).h * std::sqrt(j2.value);
}

BoundSet compute_bounds(const SumSpec& spec) {
  BoundSet b;
  b.lambda = spec.lambda();
  b.q = spec.q();
  b.stein = stein_factors(b.lambda, spec.mixture_q());
  b.thm1_kl = bound_thm1(spec);
  b.thm1_tv = bound_thm1_tv(spec);
  b.thm2_tv = bound_thm2(spec);
  b.thm3_tv = bound_thm3(spec);
  b.lecam = bound_lecam(spec);
  b.barbour_hall = bound_barbour_hall(spec);
  b.roos_equal = bound_roos_equal(spec);
  b.roos_general = bound_roos_general(spec);
  b.bcl_stein = bound_bcl_stein(spec);

  if (!b.thm1_kl) b.flags.emplace_back("thm1_na_unequal_severities");
  if (!b.thm3_tv) b.flags.emplace_back("thm3_na_no_full_support");
  if (!b.barbour_hall) b.flags.emplace_back("barbour_hall_na_unequal_severities");
  if (!b.roos_equal) b.flags.emplace_back("roos_equal_na");
  if (!b.stein.monotone_jq) b.flags.emplace_back("jq_not_monotone");
  if (b.stein.vacuous) b.flags.emplace_back("stein_factor_vacuous");
  if (std::isinf(b.roos_general)) b.flags.emplace_back("roos_general_inf");
  if (!b.bcl_stein) b.flags.emplace_back("bcl_stein_na");
  b.flags.emplace_back("roos_general_simplified");
  return b;
}

BoundReport full_report(const SumSpec& spec, bool with_information) {
  BoundReport r;
  r.bounds = compute_bounds(spec);
  const Pmf law = sum_distribution(spec);
  const Pmf target = compound_poisson(spec.lambda(), spec.mixture_q(), spec.policy());
  r.exact_tv = total_variation(law, target);
  r.exact_kl = relative_entropy(law, target);
  if (with_information) {
    r.thm2_j1_tv = bound_thm2(spec, true);
    r.j2_tv = bound_from_j2(law, spec.mixture_q(), spec.lambda());
  }
  return r;
}

std::vector<std::pair<std::string, std::optional<double>>> named_tv_bounds(const BoundSet& b) {
  return {{"thm1_tv", b.thm1_tv},         {"thm2_tv", b.thm2_tv},
          {"thm3_tv", b.thm3_tv},         {"lecam", b.lecam},
          {"barbour_hall", b.barbour_hall}, {"roos_equal", b.roos_equal},
          {"roos_general", b.roos_general}, {"bcl_stein", b.bcl_stein}};
}

}  // namespace cpa
