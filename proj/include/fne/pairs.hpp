#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <limits>
#include <vector>

#include "fne/parallel.hpp"

namespace fne {

// Index pairs (m, n) with lo <= m < n <= hi. When the full set has at most
// `budget` members every pair is produced; otherwise a deterministic
// stratified sample is drawn: the index range is cut into G buckets, one
// pair is drawn from every bucket cell (bm <= bn), and all adjacent pairs
// (m, m + 1) are added. The sample depends only on (lo, hi, budget, seed).
struct PairPlan {
  std::size_t lo = 1;
  std::size_t hi = 1;
  bool exhaustive = true;
  std::vector<std::pair<std::size_t, std::size_t>> sampled;  // empty when exhaustive

  std::size_t count() const;
};

PairPlan plan_pairs(std::size_t lo, std::size_t hi, std::size_t budget, std::uint64_t seed);

struct PairMinimum {
  double value = 0.0;
  std::size_t m = 0;
  std::size_t n = 0;
  std::size_t evaluated = 0;
};

// Minimum of margin(m, n) over a pair plan. Ties keep the earliest pair in
// plan order, so the result does not depend on the thread count.
template <class Margin>
PairMinimum min_over_pairs(const PairPlan& plan, unsigned threads, Margin&& margin) {
  PairMinimum best;
  best.value = std::numeric_limits<double>::infinity();
  if (plan.hi <= plan.lo) return best;

  const bool exhaustive = plan.exhaustive;
  const std::size_t units = exhaustive ? plan.hi - plan.lo : plan.sampled.size();
  const std::size_t chunk = exhaustive ? 8 : 4096;
  std::vector<PairMinimum> partial(chunk_count(units, chunk));
  for_each_chunk(units, chunk, threads, [&](std::size_t c, std::size_t begin, std::size_t end) {
    PairMinimum local;
    local.value = std::numeric_limits<double>::infinity();
    auto visit = [&](std::size_t m, std::size_t n) {
      double v = margin(m, n);
      if (v != v) v = -std::numeric_limits<double>::infinity();  // NaN fails loudly
      ++local.evaluated;
      if (v < local.value || local.m == 0) {
        local.value = v;
        local.m = m;
        local.n = n;
      }
    };
    if (exhaustive) {
      for (std::size_t u = begin; u < end; ++u) {
        const std::size_t m = plan.lo + u;
        for (std::size_t n = m + 1; n <= plan.hi; ++n) visit(m, n);
      }
    } else {
      for (std::size_t u = begin; u < end; ++u) visit(plan.sampled[u].first, plan.sampled[u].second);
    }
    partial[c] = local;
  });
  for (const auto& p : partial) {
    best.evaluated += p.evaluated;
    if (p.m != 0 && (p.value < best.value || best.m == 0)) {
      best.value = p.value;
      best.m = p.m;
      best.n = p.n;
    }
  }
  return best;
}

}  // namespace fne
