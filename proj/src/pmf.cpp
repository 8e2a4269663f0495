#include "cpa/pmf.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace cpa {

void TruncationPolicy::validate() const {
  if (!(epsilon > 0.0 && epsilon <= 1e-6)) {
    throw std::invalid_argument("truncation epsilon must lie in (0, 1e-6], got " +
                                std::to_string(epsilon));
  }
  if (max_support < 1) throw std::invalid_argument("max_support must be >= 1");
}

Pmf::Pmf(std::vector<double> probs, double tail_mass)
    : probs_(std::move(probs)), tail_mass_(tail_mass) {
  if (probs_.empty()) throw std::invalid_argument("pmf needs at least one entry");
  if (!(tail_mass_ >= 0.0) || !std::isfinite(tail_mass_)) {
    throw std::invalid_argument("pmf tail mass must be finite and >= 0");
  }
  for (std::size_t k = 0; k < probs_.size(); ++k) {
    if (!(probs_[k] >= 0.0) || !std::isfinite(probs_[k])) {
      throw std::invalid_argument("pmf entry " + std::to_string(k) + " is negative or not finite");
    }
  }
  const double total = stored_mass() + tail_mass_;
  if (std::abs(total - 1.0) > kMassTolerance) {
    throw std::invalid_argument("pmf mass " + std::to_string(total) + " is not 1 within 1e-12");
  }
}

double Pmf::stored_mass() const noexcept {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

Severity::Severity(Pmf pmf) : Severity(pmf, cpa::mean(pmf)) {}

Severity::Severity(Pmf pmf, double mean_value) : pmf_(std::move(pmf)), mean_(mean_value) {
  if (pmf_[0] != 0.0) throw std::invalid_argument("severity must put zero mass at 0");
  if (!(mean_ > 0.0)) throw std::invalid_argument("severity mean must be positive");
}

Pmf n_fold_convolve(const Severity& q, std::size_t n, const TruncationPolicy& policy) {
  Pmf result = point_mass(0);
  Pmf power = q.pmf();
  // Binary powering; each step is an ordinary truncated convolution.
  while (n > 0) {
    if (n & 1U) result = convolve(result, power, policy.max_support);
    n >>= 1U;
    if (n > 0) power = convolve(power, power, policy.max_support);
  }
  return result;
}

double mean(const Pmf& p) {
  double m = 0.0;
  const auto probs = p.probs();
  for (std::size_t k = 1; k < probs.size(); ++k) m += static_cast<double>(k) * probs[k];
  return m;
}

double variance(const Pmf& p) {
  const double mu = mean(p);
  const auto probs = p.probs();
  double v = 0.0;
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double d = static_cast<double>(k) - mu;
    v += d * d * probs[k];
  }
  return v;
}

Pmf size_bias(const Pmf& p) {
  const double lambda = mean(p);
  if (!(lambda > 0.0)) throw std::domain_error("size-bias undefined for a zero-mean pmf");
  const auto probs = p.probs();
  std::vector<double> out(probs.size() - 1);
  for (std::size_t y = 0; y + 1 < probs.size(); ++y) {
    out[y] = static_cast<double>(y + 1) * probs[y + 1] / lambda;
  }
  const double stored = std::accumulate(out.begin(), out.end(), 0.0);
  return Pmf(std::move(out), std::max(0.0, 1.0 - stored));
}

Severity geometric(double alpha, const TruncationPolicy& policy) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("geometric alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  policy.validate();
  const double needed = std::ceil(std::log(policy.epsilon) / std::log(alpha));
  const auto last = static_cast<std::size_t>(
      std::min(std::max(needed, 1.0), static_cast<double>(policy.max_support)));
  std::vector<double> probs(last + 1, 0.0);
  probs[1] = 1.0 - alpha;
  for (std::size_t j = 2; j <= last; ++j) probs[j] = probs[j - 1] * alpha;
  const double tail = std::pow(alpha, static_cast<double>(last));
  return Severity(Pmf(std::move(probs), tail), 1.0 / (1.0 - alpha));
}

Pmf point_mass(std::size_t k) {
  std::vector<double> probs(k + 1, 0.0);
  probs[k] = 1.0;
  return Pmf(std::move(probs));
}

Severity point_severity(std::size_t k) {
  if (k < 1) throw std::invalid_argument("severity point mass must sit at k >= 1");
  return Severity(point_mass(k), static_cast<double>(k));
}

Severity unit_severity() { return point_severity(1); }

Severity mixture(std::span<const double> weights, std::span<const Severity> parts) {
  if (weights.size() != parts.size() || parts.empty()) {
    throw std::invalid_argument("mixture needs matching, non-empty weight and part lists");
  }
  double total = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!(weights[i] >= 0.0)) throw std::invalid_argument("mixture weights must be >= 0");
    total += weights[i];
    last = std::max(last, parts[i].max_index());
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw std::invalid_argument("mixture weights sum to " + std::to_string(total) + ", not 1");
  }
  std::vector<double> probs(last + 1, 0.0);
  double tail = 0.0;
  double mean_value = 0.0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const auto part = parts[i].pmf().probs();
    for (std::size_t k = 0; k < part.size(); ++k) probs[k] += weights[i] * part[k];
    tail += weights[i] * parts[i].tail_mass();
    mean_value += weights[i] * parts[i].mean();
  }
  return Severity(Pmf(std::move(probs), tail), mean_value);
}

Pmf trim_tail(const Pmf& p, double budget) {
  const auto probs = p.probs();
  std::size_t keep = probs.size();
  double dropped = 0.0;
  while (keep > 1 && dropped + probs[keep - 1] <= budget) {
    dropped += probs[keep - 1];
    --keep;
  }
  if (keep == probs.size()) return p;
  return Pmf(std::vector<double>(probs.begin(), probs.begin() + static_cast<std::ptrdiff_t>(keep)),
             p.tail_mass() + dropped);
}

}  // namespace cpa
