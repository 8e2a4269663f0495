#pragma once

#include "cpa/pmf.hpp"

namespace cpa {

/// A distance computed on truncated pmfs, with the amount by which the
/// untruncated value may differ because of the tail masses.
struct DistanceResult {
  double value = 0.0;
  double error_budget = 0.0;
};

/// d_TV(a, b) = 1/2 sum_k |a(k) - b(k)|; error_budget = (a.tail + b.tail) / 2.
DistanceResult total_variation(const Pmf& a, const Pmf& b);

/// D(p || ref) = sum_k p(k) log(p(k) / ref(k)), natural log, 0 log 0 = 0.
///
/// Points where ref(k) = 0 and p(k) > kAbsoluteContinuitySlack make the
/// divergence +infinity. Smaller p(k) there are treated as truncation noise:
/// they are skipped and added to error_budget, which also carries both tails.
/// Points past ref's stored support are skipped the same way when ref has
/// tail mass, since ref may be positive there.
DistanceResult relative_entropy(const Pmf& p, const Pmf& ref);

inline constexpr double kAbsoluteContinuitySlack = 1e-15;

/// sqrt(d / 2): the total-variation bound implied by a relative entropy d.
double pinsker_bound(double d);

}  // namespace cpa
