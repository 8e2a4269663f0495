#include "cpa/information.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cpa {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double weighted_square(const ScoreVector& s) {
  const auto probs = s.base.probs();
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (s.defined(k)) acc += probs[k] * s.values[k] * s.values[k];
  }
  return acc;
}

ScoreVector r1_from_parts(const SumSpec& spec, const Pmf& total, const std::vector<Pmf>& loo) {
  const auto probs = total.probs();
  std::vector<double> values(probs.size(), kNaN);
  const double lambda = spec.lambda();
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] == 0.0) continue;
    double num = 0.0;
    for (std::size_t i = 0; i < spec.size(); ++i) num += spec[i].p * loo[i][s];
    values[s] = num / (lambda * probs[s]) - 1.0;
  }
  return {ScoreKind::r1, total, std::move(values)};
}

void check_projection_size(const SumSpec& spec) {
  if (spec.size() > kMaxProjectionSummands) {
    throw std::invalid_argument("projection residuals enumerate at most " +
                                std::to_string(kMaxProjectionSummands) + " summands");
  }
  for (const auto& s : spec.summands()) {
    if (s.severity.max_index() > kMaxProjectionSupport) {
      throw std::invalid_argument("projection residuals need summand support <= " +
                                  std::to_string(kMaxProjectionSupport));
    }
  }
}

// Summand laws, their sum and leave-one-out sums, convolved without tail trimming
// so that every total is exactly the convolution of its parts.
struct ExactParts {
  std::vector<Pmf> own;
  std::vector<Pmf> loo;
  Pmf total = point_mass(0);

  explicit ExactParts(const SumSpec& spec) {
    const std::size_t cap = spec.policy().max_support;
    for (const auto& s : spec.summands()) own.push_back(compound_bernoulli(s.p, s.severity));
    for (std::size_t i = 0; i < own.size(); ++i) {
      Pmf acc = point_mass(0);
      for (std::size_t j = 0; j < own.size(); ++j) {
        if (j != i) acc = convolve(acc, own[j], cap);
      }
      loo.push_back(std::move(acc));
    }
    total = convolve(loo[0], own[0], cap);
  }
};

}  // namespace

bool ScoreVector::defined(std::size_t k) const { return k < values.size() && !std::isnan(values[k]); }

double ScoreVector::expectation() const {
  const auto probs = base.probs();
  double acc = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    if (defined(k)) acc += probs[k] * values[k];
  }
  return acc;
}

bool has_full_support(const Pmf& p) {
  const auto probs = p.probs();
  std::size_t last = probs.size();
  for (std::size_t k = probs.size(); k-- > 0;) {
    if (probs[k] > kSupportThreshold) {
      last = k;
      break;
    }
  }
  if (last == probs.size()) return false;
  for (std::size_t k = 0; k < last; ++k) {
    if (!(probs[k] > kSupportThreshold)) return false;
  }
  // A pmf that stops exactly at its last stored point has finite support.
  return p.tail_mass() > 0.0 || last < p.max_index();
}

ScoreVector scaled_score(const Pmf& p) {
  const double lambda = mean(p);
  if (!(lambda > 0.0)) throw std::domain_error("scaled score undefined for a zero-mean pmf");
  const auto probs = p.probs();
  std::vector<double> values(probs.size(), kNaN);
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (probs[y] == 0.0) continue;
    values[y] = static_cast<double>(y + 1) * p[y + 1] / (lambda * probs[y]) - 1.0;
  }
  return {ScoreKind::rho, p, std::move(values)};
}

InfoResult scaled_fisher(const Pmf& p) {
  const auto score = scaled_score(p);
  return {mean(p) * weighted_square(score), has_full_support(p)};
}

ScoreVector score_r1(const SumSpec& spec) {
  return r1_from_parts(spec, sum_distribution(spec), leave_one_out_all(spec));
}

InfoResult j1_size_biased(const SumSpec& spec) {
  const auto score = score_r1(spec);
  return {spec.lambda() * weighted_square(score), has_full_support(score.base)};
}

ScoreVector score_r2(const Pmf& p, const Severity& q, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("Katti-Panjer score needs lambda > 0");
  const auto probs = p.probs();
  const auto sev = q.pmf().probs();
  std::vector<double> values(probs.size(), kNaN);
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (!(probs[y] > kSupportThreshold)) continue;
    const std::size_t jmax = std::min(y, sev.size() - 1);
    double acc = 0.0;
    for (std::size_t j = 1; j <= jmax; ++j) acc += static_cast<double>(j) * sev[j] * probs[y - j];
    values[y] = lambda * acc / probs[y] - static_cast<double>(y);
  }
  return {ScoreKind::r2, p, std::move(values)};
}

InfoResult j2_katti_panjer(const Pmf& p, const Severity& q, std::optional<double> lambda) {
  const double lam = lambda.value_or(mean(p) / q.mean());
  const auto score = score_r2(p, q, lam);
  return {weighted_square(score), has_full_support(p)};
}

InfoResult johnstone_macgibbon(const Pmf& p) {
  const auto probs = p.probs();
  double acc = 0.0;
  for (std::size_t y = 0; y < probs.size(); ++y) {
    if (!(probs[y] > kSupportThreshold)) continue;
    const double prev = y == 0 ? 0.0 : probs[y - 1];
    const double d = prev / probs[y] - 1.0;
    acc += probs[y] * d * d;
  }
  return {acc, has_full_support(p)};
}

double projection_residual_r1(const SumSpec& spec) {
  check_projection_size(spec);
  if (spec.size() == 1) return 0.0;
  const ExactParts parts(spec);
  const auto lhs = r1_from_parts(spec, parts.total, parts.loo);

  const auto probs = parts.total.probs();
  const double lambda = spec.lambda();
  std::vector<double> conditional(probs.size(), 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    // r1 of a lone summand: p / (1 - p) at 0 and -1 elsewhere.
    const double p = spec[i].p;
    const Pmf& own = parts.own[i];
    const Pmf& rest = parts.loo[i];
    const double w = p / lambda;
    for (std::size_t x = 0; x < own.size(); ++x) {
      if (own[x] == 0.0) continue;
      const double px = own[x] * (x == 0 ? p / (1.0 - p) : -1.0) * w;
      for (std::size_t t = 0; t < rest.size() && x + t < probs.size(); ++t) conditional[x + t] += px * rest[t];
    }
  }
  double worst = 0.0;
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (probs[s] == 0.0) continue;
    worst = std::max(worst, std::abs(lhs.values[s] - conditional[s] / probs[s]));
  }
  return worst;
}

ResidualResult projection_residual_r2(const SumSpec& spec) {
  check_projection_size(spec);
  const ExactParts parts(spec);
  const auto lhs = score_r2(parts.total, spec.mixture_q(), spec.lambda());

  ResidualResult result;
  std::vector<double> conditional(parts.total.size(), 0.0);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const Pmf& own = parts.own[i];
    result.support_full = result.support_full && has_full_support(own);
    const auto sev = spec[i].severity.pmf().probs();
    const Pmf& rest = parts.loo[i];
    for (std::size_t x = 0; x < own.size(); ++x) {
      if (own[x] == 0.0) continue;
      // P_i(x) r2_i(x), formed without dividing by P_i(x).
      double acc = 0.0;
      for (std::size_t j = 1; j <= std::min(x, sev.size() - 1); ++j) {
        acc += static_cast<double>(j) * sev[j] * own[x - j];
      }
      const double px = spec[i].p * acc - static_cast<double>(x) * own[x];
      for (std::size_t t = 0; t < rest.size() && x + t < parts.total.size(); ++t) {
        conditional[x + t] += px * rest[t];
      }
    }
  }
  if (spec.size() == 1) return result;  // the identity is tautological

  const auto probs = parts.total.probs();
  for (std::size_t s = 0; s < probs.size(); ++s) {
    if (!(probs[s] > kBulkThreshold) || !lhs.defined(s)) continue;
    result.value = std::max(result.value, std::abs(lhs.values[s] - conditional[s] / probs[s]));
  }
  return result;
}

}  // namespace cpa
