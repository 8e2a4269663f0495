#include "cpa/compound.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace cpa {
namespace {

void check_p(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("Bernoulli parameter must lie in (0, 1), got " + std::to_string(p));
  }
}

Severity build_mixture(const std::vector<SummandSpec>& summands) {
  if (summands.empty()) throw std::invalid_argument("sum spec needs at least one summand");
  double lambda = 0.0;
  for (const auto& s : summands) {
    check_p(s.p);
    lambda += s.p;
  }
  std::vector<double> weights;
  std::vector<Severity> parts;
  weights.reserve(summands.size());
  parts.reserve(summands.size());
  for (const auto& s : summands) {
    weights.push_back(s.p / lambda);
    parts.push_back(s.severity);
  }
  return mixture(weights, parts);
}

}  // namespace

SumSpec::SumSpec(std::vector<SummandSpec> summands, TruncationPolicy policy)
    : summands_(std::move(summands)), policy_(policy), mixture_(build_mixture(summands_)) {
  policy_.validate();
  for (const auto& s : summands_) lambda_ += s.p;
}

SumSpec SumSpec::equal(std::size_t n, double p, const Severity& q, TruncationPolicy policy) {
  return SumSpec(std::vector<SummandSpec>(n, SummandSpec{p, q}), policy);
}

Pmf compound(const Severity& q, const Pmf& r, const TruncationPolicy& policy) {
  const auto weights = r.probs();
  std::vector<double> out(1, 0.0);
  double tail = r.tail_mass();
  Pmf power = point_mass(0);
  for (std::size_t y = 0; y < weights.size(); ++y) {
    if (y > 0) power = convolve(power, q.pmf(), policy.max_support);
    const auto pw = power.probs();
    if (out.size() < pw.size()) out.resize(pw.size(), 0.0);
    for (std::size_t k = 0; k < pw.size(); ++k) out[k] += weights[y] * pw[k];
    tail += weights[y] * power.tail_mass();
  }
  return Pmf(std::move(out), tail);
}

Pmf compound_bernoulli(double p, const Severity& q) {
  check_p(p);
  const auto sev = q.pmf().probs();
  std::vector<double> out(sev.size());
  out[0] = 1.0 - p;
  for (std::size_t k = 1; k < sev.size(); ++k) out[k] = p * sev[k];
  return Pmf(std::move(out), p * q.tail_mass());
}

Pmf compound_poisson(double lambda, const Severity& q, const TruncationPolicy& policy) {
  if (!(lambda > 0.0)) throw std::invalid_argument("compound Poisson needs lambda > 0");
  if (lambda > kMaxPoissonLambda) {
    throw std::invalid_argument("lambda " + std::to_string(lambda) +
                                " exceeds the supported range (exp(-lambda) underflows)");
  }
  policy.validate();
  const auto sev = q.pmf().probs();
  // j Q(j), precomputed once.
  std::vector<double> weighted(sev.size(), 0.0);
  for (std::size_t j = 1; j < sev.size(); ++j) weighted[j] = static_cast<double>(j) * sev[j];

  const double reachable = std::exp(-lambda * q.tail_mass());
  const double target = reachable - policy.epsilon;

  std::vector<double> out;
  out.reserve(256);
  out.push_back(std::exp(-lambda));
  long double cumulative = out[0];
  for (std::size_t k = 1; k <= policy.max_support && cumulative < target; ++k) {
    const std::size_t jmax = std::min(k, sev.size() - 1);
    double acc = 0.0;
    for (std::size_t j = 1; j <= jmax; ++j) acc += weighted[j] * out[k - j];
    const double value = lambda * acc / static_cast<double>(k);
    out.push_back(value);
    cumulative += value;
  }
  const double tail = std::max(0.0L, 1.0L - cumulative);
  return Pmf(std::move(out), static_cast<double>(tail));
}

Pmf sum_distribution(const SumSpec& spec) {
  const auto& policy = spec.policy();
  const double budget = policy.epsilon / static_cast<double>(spec.size());
  Pmf acc = point_mass(0);
  for (const auto& s : spec.summands()) {
    acc = trim_tail(convolve(acc, compound_bernoulli(s.p, s.severity), policy.max_support), budget);
  }
  return acc;
}

Pmf leave_one_out(const SumSpec& spec, std::size_t i) {
  if (i >= spec.size()) {
    throw std::out_of_range("leave-one-out index " + std::to_string(i) + " out of range");
  }
  const auto& policy = spec.policy();
  const double budget = policy.epsilon / static_cast<double>(spec.size());
  Pmf acc = point_mass(0);
  for (std::size_t j = 0; j < spec.size(); ++j) {
    if (j == i) continue;
    const auto& s = spec[j];
    acc = trim_tail(convolve(acc, compound_bernoulli(s.p, s.severity), policy.max_support), budget);
  }
  return acc;
}

std::vector<Pmf> leave_one_out_all(const SumSpec& spec) {
  const std::size_t n = spec.size();
  const auto& policy = spec.policy();
  const double budget = policy.epsilon / static_cast<double>(n);
  std::vector<Pmf> parts;
  parts.reserve(n);
  for (const auto& s : spec.summands()) parts.push_back(compound_bernoulli(s.p, s.severity));

  // prefix[i] = Y_0 * ... * Y_{i-1}; suffix[i] = Y_i * ... * Y_{n-1}.
  std::vector<Pmf> prefix(n + 1, point_mass(0));
  std::vector<Pmf> suffix(n + 1, point_mass(0));
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = trim_tail(convolve(prefix[i], parts[i], policy.max_support), budget);
  }
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = trim_tail(convolve(parts[i], suffix[i + 1], policy.max_support), budget);
  }
  std::vector<Pmf> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.push_back(trim_tail(convolve(prefix[i], suffix[i + 1], policy.max_support), budget));
  }
  return out;
}

}  // namespace cpa
