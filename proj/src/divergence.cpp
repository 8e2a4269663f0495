#include "cpa/divergence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpa {

DistanceResult total_variation(const Pmf& a, const Pmf& b) {
  const std::size_t n = std::max(a.size(), b.size());
  double l1 = 0.0;
  for (std::size_t k = 0; k < n; ++k) l1 += std::abs(a[k] - b[k]);
  return {0.5 * l1, 0.5 * (a.tail_mass() + b.tail_mass())};
}

DistanceResult relative_entropy(const Pmf& p, const Pmf& ref) {
  double sum = 0.0;
  double skipped = 0.0;
  const auto probs = p.probs();
  for (std::size_t k = 0; k < probs.size(); ++k) {
    const double pk = probs[k];
    if (pk == 0.0) continue;
    const double rk = ref[k];
    if (rk == 0.0) {
      const bool in_ref_tail = k >= ref.size() && ref.tail_mass() > 0.0;
      if (!in_ref_tail && pk > kAbsoluteContinuitySlack) {
        return {std::numeric_limits<double>::infinity(), 0.0};
      }
      skipped += pk;
      continue;
    }
    sum += pk * std::log(pk / rk);
  }
  return {std::max(0.0, sum), skipped + p.tail_mass() + ref.tail_mass()};
}

double pinsker_bound(double d) {
  if (!(d >= 0.0)) throw std::invalid_argument("Pinsker bound needs a non-negative divergence");
  return std::sqrt(d / 2.0);
}

}  // namespace cpa
