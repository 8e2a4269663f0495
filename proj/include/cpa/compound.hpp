#pragma once

#include <cstddef>
#include <vector>

#include "cpa/pmf.hpp"

namespace cpa {

/// One summand Y = B X with B ~ Bern(p), X ~ severity, independent.
struct SummandSpec {
  double p;
  Severity severity;
};

/// Ordered summands of S = sum_i B_i X_i with the derived compound Poisson
/// parameters: lambda = sum p_i, mixture Q = sum (p_i / lambda) Q_i and its mean q.
class SumSpec {
 public:
  SumSpec(std::vector<SummandSpec> summands, TruncationPolicy policy = {});

  /// n summands sharing p and Q.
  static SumSpec equal(std::size_t n, double p, const Severity& q, TruncationPolicy policy = {});

  const std::vector<SummandSpec>& summands() const noexcept { return summands_; }
  std::size_t size() const noexcept { return summands_.size(); }
  const SummandSpec& operator[](std::size_t i) const { return summands_.at(i); }
  double lambda() const noexcept { return lambda_; }
  const Severity& mixture_q() const noexcept { return mixture_; }
  double q() const noexcept { return mixture_.mean(); }
  const TruncationPolicy& policy() const noexcept { return policy_; }

 private:
  std::vector<SummandSpec> summands_;
  TruncationPolicy policy_;
  double lambda_ = 0.0;
  Severity mixture_;
};

/// C_Q R: the law of X_1 + ... + X_Y with Y ~ R and X_i iid ~ Q.
Pmf compound(const Severity& q, const Pmf& r, const TruncationPolicy& policy = {});

/// (1 - p) delta_0 + p Q, the law of one summand B X.
Pmf compound_bernoulli(double p, const Severity& q);

/// CPo(lambda, Q) by the Katti-Panjer recursion
///   P(0) = exp(-lambda),  k P(k) = lambda sum_{j=1}^{k} j Q(j) P(k - j).
/// All terms are non-negative, so the recursion is forward stable. It runs
/// until the accumulated mass reaches exp(-lambda * Q.tail) - epsilon (the
/// total mass reachable with a truncated Q) or max_support is hit; the rest
/// is reported as tail_mass.
Pmf compound_poisson(double lambda, const Severity& q, const TruncationPolicy& policy = {});

/// Law of S = sum_i B_i X_i.
Pmf sum_distribution(const SumSpec& spec);

/// F^(i): law of the sum with summand i removed (recomputed, no deconvolution).
Pmf leave_one_out(const SumSpec& spec, std::size_t i);

/// All F^(i) at once from prefix and suffix partial convolutions.
std::vector<Pmf> leave_one_out_all(const SumSpec& spec);

/// Largest lambda accepted by compound_poisson (exp(-lambda) must not underflow).
inline constexpr double kMaxPoissonLambda = 700.0;

}  // namespace cpa
