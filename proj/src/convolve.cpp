#include "cpa/pmf.hpp"

#include <algorithm>
#include <cstdint>
#include <vector>

namespace cpa {
namespace {

std::size_t result_last_index(const Pmf& a, const Pmf& b, std::size_t max_support) {
  return std::min(a.max_index() + b.max_index(), max_support);
}

// Mass of the product measure with at least one factor in its tail.
double joint_tail(const Pmf& a, const Pmf& b) {
  return a.tail_mass() + b.tail_mass() - a.tail_mass() * b.tail_mass();
}

// Mass of all products a[i] b[j] with i + j > last.
double truncated_mass(const Pmf& a, const Pmf& b, std::size_t last) {
  const auto pa = a.probs();
  const auto pb = b.probs();
  std::vector<double> suffix(pb.size() + 1, 0.0);
  for (std::size_t j = pb.size(); j-- > 0;) suffix[j] = suffix[j + 1] + pb[j];
  double lost = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const std::size_t first_out = last + 1 > i ? last + 1 - i : 0;
    if (first_out < pb.size()) lost += pa[i] * suffix[first_out];
  }
  return lost;
}

}  // namespace

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_support) {
  const std::size_t last = result_last_index(a, b, max_support);
  const auto pa = a.probs();
  const auto pb = b.probs();
  const std::size_t nb = b.max_index();
  const std::size_t na = a.max_index();
  std::vector<double> out(last + 1, 0.0);
  const auto count = static_cast<std::int64_t>(last + 1);

#pragma omp parallel for schedule(static) if (count * static_cast<std::int64_t>(std::min(na, nb) + 1) > 65536)
  for (std::int64_t kk = 0; kk < count; ++kk) {
    const auto k = static_cast<std::size_t>(kk);
    const std::size_t lo = k > nb ? k - nb : 0;
    const std::size_t hi = std::min(k, na);
    double acc = 0.0;
    for (std::size_t j = lo; j <= hi; ++j) acc += pa[j] * pb[k - j];
    out[k] = acc;
  }

  const double tail = joint_tail(a, b) + truncated_mass(a, b, last);
  return Pmf(std::move(out), tail);
}

namespace serial {

Pmf convolve(const Pmf& a, const Pmf& b, std::size_t max_support) {
  const std::size_t last = result_last_index(a, b, max_support);
  const auto pa = a.probs();
  const auto pb = b.probs();
  std::vector<double> out(last + 1, 0.0);
  double lost = 0.0;
  for (std::size_t i = 0; i < pa.size(); ++i) {
    for (std::size_t j = 0; j < pb.size(); ++j) {
      const double m = pa[i] * pb[j];
      if (i + j <= last) {
        out[i + j] += m;
      } else {
        lost += m;
      }
    }
  }
  return Pmf(std::move(out), joint_tail(a, b) + lost);
}

}  // namespace serial
}  // namespace cpa
