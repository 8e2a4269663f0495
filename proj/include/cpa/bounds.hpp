#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cpa/compound.hpp"
#include "cpa/divergence.hpp"
#include "cpa/pmf.hpp"

namespace cpa {

/// Stein factors of CPo(lambda, Q).
///
/// With delta = [lambda (Q(1) - 2 Q(2))]^{-1} (+inf when Q(1) = 2 Q(2)):
///   h0 = 1 if delta >= 1, else sqrt(delta) (2 - sqrt(delta));
///   h  = h0 when {j Q(j)} is non-increasing, else exp(lambda) min{1, 1 / (lambda Q(1))};
///   g  = min{1, delta [delta / 4 + log+(2 / delta)]}, only for non-increasing {j Q(j)}.
struct SteinFactors {
  double delta = 0.0;
  double h0 = 1.0;
  double h = 1.0;
  std::optional<double> g;
  bool monotone_jq = false;
  /// h exceeded kVacuousStein: any total-variation bound built on it is useless.
  bool vacuous = false;
};

inline constexpr double kVacuousStein = 1e6;
/// Clamp for exp(lambda) in the non-monotone branch.
inline constexpr double kMaxStein = 1e300;

/// Whether j Q(j) is non-increasing over the stored support (relative slack 1e-12).
bool jq_non_increasing(const Severity& q);

SteinFactors stein_factors(double lambda, const Severity& q);

/// Whether all severities agree pointwise within 1e-12.
bool identical_severities(const SumSpec& spec);

/// Relative-entropy bound (1 / lambda) sum p_i^3 / (1 - p_i); requires iid X_i.
std::optional<double> bound_thm1(const SumSpec& spec);
/// Its total-variation form through Pinsker: sqrt(bound_thm1 / 2).
std::optional<double> bound_thm1_tv(const SumSpec& spec);

/// D(Q) = sum_j sum_i (j p_i / q) |Q_i(j) - Q(j)|.
double dissimilarity(const SumSpec& spec);

/// H q {[sum p_i^3 / (1 - p_i)]^{1/2} + D(Q)}, or with use_j1 the sharper
/// H q {sqrt(lambda J_{Q,1}(S)) + D(Q)}.
double bound_thm2(const SumSpec& spec, bool use_j1 = false);

/// K(Q) = sum_y Q(y) y^2 (Q^{*2}(y) / (2 Q(y)) - 1)^2; needs Q positive on {1, 2, ...}.
/// The sum runs over the stored support; the omitted part is of order tail_mass.
std::optional<double> severity_k(const Severity& q);

/// H(lambda, Q) {sum_i p_i^3 K(Q_i)}^{1/2}; n/a unless every Q_i has full support.
std::optional<double> bound_thm3(const SumSpec& spec);

/// sum p_i^2.
double bound_lecam(const SumSpec& spec);
/// min{1, 1 / lambda} sum p_i^2; needs identical severities.
std::optional<double> bound_barbour_hall(const SumSpec& spec);
/// (3 / (4e) + 7 sqrt(theta) (3 - 2 sqrt(theta)) / (6 (1 - sqrt(theta))^2)) theta
/// with theta = sum p_i^2 / lambda; needs identical severities and theta < 1.
std::optional<double> bound_roos_equal(const SumSpec& spec);

/// g(z) = 2 z^{-2} e^z (e^{-z} - 1 + z).
double roos_g(double z);

/// Simplified general-Q bound alpha2 / (1 - 2 e alpha2)_+; +inf when the
/// denominator vanishes or {j Q(j)} is not non-increasing.
double bound_roos_general(const SumSpec& spec);

/// G(lambda, Q) sum q_i^2 p_i^2; needs non-increasing {j Q(j)}.
std::optional<double> bound_bcl_stein(const SumSpec& spec);

/// H(lambda, Q) sqrt(J_{Q,2}(P)); n/a unless P has full support.
std::optional<double> bound_from_j2(const Pmf& p, const Severity& q, double lambda);

/// Every bound for one spec, without the exact distances.
struct BoundSet {
  double lambda = 0.0;
  double q = 0.0;
  SteinFactors stein;
  std::optional<double> thm1_kl;
  std::optional<double> thm1_tv;
  double thm2_tv = 0.0;
  std::optional<double> thm3_tv;
  double lecam = 0.0;
  std::optional<double> barbour_hall;
  std::optional<double> roos_equal;
  double roos_general = 0.0;
  std::optional<double> bcl_stein;
  std::vector<std::string> flags;
};

BoundSet compute_bounds(const SumSpec& spec);

struct BoundReport {
  BoundSet bounds;
  /// Sharper Theorem 2 variant through the size-biased information; only
  /// filled when requested (it needs every leave-one-out law).
  std::optional<double> thm2_j1_tv;
  /// H sqrt(J_{Q,2}(S)) on the exact sum law.
  std::optional<double> j2_tv;
  DistanceResult exact_tv;
  DistanceResult exact_kl;
};

/// Exact sum law, exact CPo(lambda, Q), exact TV and KL, and every bound.
BoundReport full_report(const SumSpec& spec, bool with_information = false);

/// Bounds in report order, paired with their names; n/a entries are empty.
std::vector<std::pair<std::string, std::optional<double>>> named_tv_bounds(const BoundSet& b);

}  // namespace cpa
