#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cpa {

/// Tail-mass budget and support cap applied when a pmf is constructed.
struct TruncationPolicy {
  double epsilon = 1e-12;
  std::size_t max_support = 4096;

  /// Throws std::invalid_argument unless 0 < epsilon <= 1e-6 and max_support >= 1.
  void validate() const;
};

/// Probability mass function on {0, 1, ..., N} plus the mass known to lie
/// beyond N. Truncation never renormalizes: anything that does not fit is
/// carried in tail_mass, so sum(probs) + tail_mass stays within 1e-12 of 1.
class Pmf {
 public:
  static constexpr double kMassTolerance = 1e-12;

  /// Validates non-negativity and mass conservation.
  explicit Pmf(std::vector<double> probs, double tail_mass = 0.0);

  std::span<const double> probs() const noexcept { return probs_; }
  /// P(k); zero for k beyond the stored support.
  double operator[](std::size_t k) const noexcept {
    return k < probs_.size() ? probs_[k] : 0.0;
  }
  std::size_t size() const noexcept { return probs_.size(); }
  /// Largest stored index N.
  std::size_t max_index() const noexcept { return probs_.size() - 1; }
  double tail_mass() const noexcept { return tail_mass_; }
  /// Sum of the stored probabilities.
  double stored_mass() const noexcept;

 private:
  std::vector<double> probs_;
  double tail_mass_;
};

/// A distribution on {1, 2, ...}: a Pmf with zero mass at 0 and a positive mean.
class Severity {
 public:
  /// Mean computed from the stored vector (a lower bound when tail_mass > 0).
  explicit Severity(Pmf pmf);
  /// Mean supplied from a closed form.
  Severity(Pmf pmf, double mean);

  const Pmf& pmf() const noexcept { return pmf_; }
  double mean() const noexcept { return mean_; }
  double operator[](std::size_t k) const noexcept { return pmf_[k]; }
  std::size_t max_index() const noexcept { return pmf_.max_index(); }
  double tail_mass() const noexcept { return pmf_.tail_mass(); }

 private:
  Pmf pmf_;
  double mean_;
};

// Kernels. Both return a * b on {0, ..., min(Na + Nb, max_support)}; mass
// products landing beyond the cap are added to tail_mass together with the
// operands' tails. `convolve` is the production path (OpenMP gather loop, one
// output index per iteration, fixed inner summation order, so results do not
// depend on the thread count). `serial::convolve` is the straightforward
// scatter loop kept as the correctness reference.
Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_support = TruncationPolicy{}.max_support);

namespace serial {
Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_support = TruncationPolicy{}.max_support);
}  // namespace serial

/// Q^{*n}; Q^{*0} is the point mass at 0.
Pmf n_fold_convolve(const Severity& q, std::size_t n, const TruncationPolicy& policy = {});

/// Mean and variance over the stored support. Both are lower bounds of the
/// untruncated moments; the missing part is controlled by tail_mass.
double mean(const Pmf& p);
double variance(const Pmf& p);

/// Reduced size-biased distribution P#(y) = (y + 1) P(y + 1) / mean(P).
/// Throws std::domain_error when the mean is zero.
Pmf size_bias(const Pmf& p);

/// Q(j) = (1 - alpha) alpha^(j - 1), truncated at the first N with alpha^N <= epsilon
/// (or at max_support). The stored mean is the exact 1 / (1 - alpha).
Severity geometric(double alpha, const TruncationPolicy& policy = {});

Pmf point_mass(std::size_t k);
Severity unit_severity();
/// delta_k as a severity; k >= 1.
Severity point_severity(std::size_t k);

/// Convex combination sum_i w_i Q_i. Weights must be non-negative and sum to 1.
Severity mixture(std::span<const double> weights, std::span<const Severity> parts);

/// Moves the longest trailing run whose total mass is <= budget into tail_mass.
/// At least one entry is always kept.
Pmf trim_tail(const Pmf& p, double budget);

}  // namespace cpa
