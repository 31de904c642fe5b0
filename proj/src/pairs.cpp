#include "fne/pairs.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace fne {

std::size_t PairPlan::count() const {
  if (!exhaustive) return sampled.size();
  if (hi <= lo) return 0;
  const std::size_t m = hi - lo + 1;
  return m * (m - 1) / 2;
}

PairPlan plan_pairs(std::size_t lo, std::size_t hi, std::size_t budget, std::uint64_t seed) {
  if (lo == 0) throw std::invalid_argument("plan_pairs: indices are 1-based");
  PairPlan plan;
  plan.lo = lo;
  plan.hi = hi;
  if (hi <= lo) return plan;

  const std::size_t span = hi - lo + 1;
  const std::size_t total = span * (span - 1) / 2;
  if (total <= budget) return plan;

  plan.exhaustive = false;
  const auto buckets = std::clamp<std::size_t>(
      static_cast<std::size_t>(std::sqrt(2.0 * static_cast<double>(budget))), 1, span);
  auto bucket_begin = [&](std::size_t b) { return lo + b * span / buckets; };

  std::mt19937_64 rng(seed);
  plan.sampled.reserve(buckets * (buckets + 1) / 2 + span);
  for (std::size_t bm = 0; bm < buckets; ++bm) {
    const std::size_t m_lo = bucket_begin(bm);
    const std::size_t m_hi = bucket_begin(bm + 1) - 1;
    for (std::size_t bn = bm; bn < buckets; ++bn) {
      const std::size_t n_lo = bucket_begin(bn);
      const std::size_t n_hi = bucket_begin(bn + 1) - 1;
      if (bn == bm) {
        if (m_hi <= m_lo) continue;
        std::uniform_int_distribution<std::size_t> pick_m(m_lo, m_hi - 1);
        const std::size_t m = pick_m(rng);
        std::uniform_int_distribution<std::size_t> pick_n(m + 1, m_hi);
        plan.sampled.emplace_back(m, pick_n(rng));
      } else {
        std::uniform_int_distribution<std::size_t> pick_m(m_lo, m_hi);
        std::uniform_int_distribution<std::size_t> pick_n(n_lo, n_hi);
        const std::size_t m = pick_m(rng);
        plan.sampled.emplace_back(m, pick_n(rng));
      }
    }
  }
  for (std::size_t m = lo; m < hi; ++m) plan.sampled.emplace_back(m, m + 1);
  return plan;
}

}  // namespace fne
