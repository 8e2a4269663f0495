#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "cpa/compound.hpp"
#include "cpa/pmf.hpp"

namespace cpa {

enum class ScoreKind { rho, r1, r2 };

/// Pointwise score values on the stored support of `base`. Points where the
/// score is undefined (P(y) = 0, or below kSupportThreshold for r2) hold NaN.
struct ScoreVector {
  ScoreKind kind;
  Pmf base;
  std::vector<double> values;

  bool defined(std::size_t k) const;
  /// sum_k base(k) values(k) over the defined points.
  double expectation() const;
};

struct InfoResult {
  double value = 0.0;
  /// Whether the base pmf is positive on all of {0, 1, ...}: no interior
  /// point below kSupportThreshold, and mass continuing past the last
  /// stored point above it.
  bool support_full = false;
};

/// Probabilities at or below this are treated as outside the support by the
/// Katti-Panjer and Johnstone-MacGibbon functionals.
inline constexpr double kSupportThreshold = 1e-12;

bool has_full_support(const Pmf& p);

/// rho(y) = (y + 1) P(y + 1) / (lambda P(y)) - 1 with lambda = mean(P).
ScoreVector scaled_score(const Pmf& p);
/// J_pi = lambda E[rho^2].
InfoResult scaled_fisher(const Pmf& p);

/// r1(s) = sum_i p_i F^(i)(s) / (lambda P(s)) - 1 for a compound Bernoulli
/// sum, where F^(i) is the leave-one-out law (C_Q(Bern(p)#) = delta_0, so
/// the modified sum P^(i) coincides with F^(i)).
ScoreVector score_r1(const SumSpec& spec);
/// J_{Q,1}(S) = lambda E[r1^2].
InfoResult j1_size_biased(const SumSpec& spec);

/// r2(y) = lambda sum_{j >= 1} j Q(j) P(y - j) / P(y) - y on {y : P(y) > kSupportThreshold}.
ScoreVector score_r2(const Pmf& p, const Severity& q, double lambda);
/// J_{Q,2}(Y) = E[r2^2] over the thresholded support. lambda defaults to mean(P) / mean(Q).
InfoResult j2_katti_panjer(const Pmf& p, const Severity& q, std::optional<double> lambda = {});

/// I(Y) = E[(P(Y - 1) / P(Y) - 1)^2] with P(-1) = 0.
InfoResult johnstone_macgibbon(const Pmf& p);

/// Largest summand count and per-summand support accepted by the exact
/// conditional-expectation enumeration in the projection residuals.
inline constexpr std::size_t kMaxProjectionSummands = 8;
inline constexpr std::size_t kMaxProjectionSupport = 200;

/// max_s |r1(s) - E[sum_i (p_i / lambda) r1(Y_i) | S = s]| over {s : P(s) > 0},
/// with the conditional expectation enumerated over (Y_i, leave-one-out) pairs.
/// Sums are convolved without tail trimming here, so the residual is rounding only.
double projection_residual_r1(const SumSpec& spec);

struct ResidualResult {
  double value = 0.0;
  /// False when some summand is not fully supported (the identity need not hold).
  bool support_full = true;
};

/// Bulk support used by projection_residual_r2.
inline constexpr double kBulkThreshold = 1e-10;

/// max_s |r2(s; S, Q) - E[sum_i r2(Y_i; P_i, Q_i) | S = s]| over {s : P(s) > kBulkThreshold}.
/// Severity truncation leaves an error of order (dropped severity mass) / P(s),
/// so a severity epsilon well below kBulkThreshold is needed for a tight residual.
ResidualResult projection_residual_r2(const SumSpec& spec);

}  // namespace cpa
