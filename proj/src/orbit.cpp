#include "fne/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fne/parallel.hpp"
#include "fne/summation.hpp"

namespace fne {

namespace {

void require_index(const Orbit& orbit, std::size_t n) {
  if (n == 0 || n > orbit.size())
    throw std::out_of_range("orbit index " + std::to_string(n) + " outside 1.." + std::to_string(orbit.size()));
}

// rho_m rho_n exp(-(t_m - t_n)^2) without range checks.
inline double gram(const Orbit& orbit, std::size_t m, std::size_t n) {
  const double gap = orbit.t(m) - orbit.t(n);
  return orbit.rho(m) * orbit.rho(n) * std::exp(-gap * gap);
}

// Upper bound on sum_{k >= L} d_k^2 past the last point L.
double default_tail(const Mesh& mesh) {
  switch (mesh.kind()) {
    case MeshKind::harmonic:
      // sum_{k > N} delta^2 / k^2 <= delta^2 / N
      return mesh.delta() * mesh.delta() / static_cast<double>(mesh.size());
    case MeshKind::block: {
      // Block j contributes at most 4^{-(j+1)} + 2^{-(j+1)}.
      const auto K = static_cast<int>(mesh.block_meta()->count());
      return (4.0 / 3.0) * std::ldexp(1.0, -2 * (K + 2)) + std::ldexp(1.0, -(K + 1));
    }
    case MeshKind::custom:
      break;
  }
  return std::numeric_limits<double>::infinity();
}

}  // namespace

Orbit::Orbit(Mesh mesh, std::optional<double> tail_bound) : mesh_(std::move(mesh)) {
  require_mesh_axioms(mesh_);
  const std::size_t points = mesh_.size() + 1;
  log_rho_.resize(points);
  rho_.resize(points);
  rho_product_.resize(points);

  CompensatedSum squares;
  double product = 1.0;
  for (std::size_t n = 1; n <= points; ++n) {
    log_rho_[n - 1] = -squares.value();
    rho_[n - 1] = std::exp(log_rho_[n - 1]);
    rho_product_[n - 1] = product;
    if (n <= mesh_.size()) {
      const double d = mesh_.d(n);
      squares += d * d;
      product *= std::exp(-d * d);
    }
  }

  tail_ = tail_bound ? *tail_bound : default_tail(mesh_);
  if (tail_ < 0.0) throw std::invalid_argument("tail bound must be non-negative");
  bracket_.hi = rho_.back();
  bracket_.lo = std::isinf(tail_) ? 0.0 : rho_.back() * std::exp(-tail_);
}

double Orbit::max_rho_deviation() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < rho_.size(); ++i) worst = std::max(worst, std::fabs(rho_product_[i] / rho_[i] - 1.0));
  return worst;
}

Orbit build_orbit(Mesh mesh) { return Orbit(std::move(mesh)); }

double pair_inner(const Orbit& orbit, std::size_t m, std::size_t n) {
  if (m == kInfinity || n == kInfinity) return 0.0;
  require_index(orbit, m);
  require_index(orbit, n);
  if (m == n) return orbit.rho(n) * orbit.rho(n);
  return gram(orbit, m, n);
}

double combination_inner(const Orbit& orbit, std::span<const Term> a, std::span<const Term> b) {
  CompensatedSum sum;
  for (const auto& x : a)
    for (const auto& y : b) sum += x.coeff * y.coeff * pair_inner(orbit, x.index, y.index);
  return sum.value();
}

IdentityResiduals orbit_identities(const Orbit& orbit, std::size_t n) {
  require_index(orbit, n);
  require_index(orbit, n + 1);
  const double norm_next = pair_inner(orbit, n + 1, n + 1);
  const double cross = pair_inner(orbit, n, n + 1);
  IdentityResiduals r;
  r.successor_gram = std::fabs(cross - norm_next) / norm_next;
  const Term diff[] = {{n + 1, 1.0}, {n, -1.0}};
  const Term next[] = {{n + 1, 1.0}};
  r.orthogonality = std::fabs(combination_inner(orbit, diff, next)) / norm_next;

  const std::size_t last = orbit.size();
  r.min_gram = std::min({pair_inner(orbit, 1, n), pair_inner(orbit, n, n + 1), pair_inner(orbit, n, last),
                         pair_inner(orbit, 1, last)});
  return r;
}

double firm_residual(const Orbit& orbit, std::size_t m, std::size_t n) {
  if (m == 0 || m >= n) throw std::invalid_argument("firm_residual needs 1 <= m < n");
  const std::size_t m1 = m + 1;
  const std::size_t n1 = (n == kInfinity) ? kInfinity : n + 1;
  // <x_{m+1} - x_{n+1}, x_m - x_{m+1} - x_n + x_{n+1}>
  const Term left[] = {{m1, 1.0}, {n1, -1.0}};
  const Term right[] = {{m, 1.0}, {m1, -1.0}, {n, -1.0}, {n1, 1.0}};
  return combination_inner(orbit, left, right);
}

IdentitySides cone_equivalence_residual(const Orbit& orbit, std::span<const Term> cone, std::size_t n) {
  for (const auto& term : cone)
    if (term.coeff < 0.0) throw std::invalid_argument("cone coefficients must be non-negative");
  require_index(orbit, n + 1);

  std::vector<Term> left{{n + 1, 1.0}};
  for (const auto& term : cone) left.push_back({term.index, -term.coeff});
  const Term step[] = {{n, 1.0}, {n + 1, -1.0}};

  const Term next[] = {{n + 1, 1.0}};
  const Term here[] = {{n, 1.0}};
  return {combination_inner(orbit, left, step),
          combination_inner(orbit, next, cone) - combination_inner(orbit, here, cone)};
}

bool CesaroTrace::has(std::size_t n) const {
  if (n >= 1 && n <= y_norm.size()) return true;
  return std::binary_search(probe_norms.begin(), probe_norms.end(), std::pair<std::size_t, double>{n, 0.0},
                            [](const auto& a, const auto& b) { return a.first < b.first; });
}

double CesaroTrace::norm_at(std::size_t n) const {
  if (n >= 1 && n <= y_norm.size()) return y_norm[n - 1];
  auto it = std::lower_bound(probe_norms.begin(), probe_norms.end(), n,
                             [](const auto& a, std::size_t key) { return a.first < key; });
  if (it == probe_norms.end() || it->first != n)
    throw std::out_of_range("Cesaro norm at " + std::to_string(n) + " was not computed");
  return it->second;
}

namespace {

// sum_{first <= k < n} rho_k exp(-(t_n - t_k)^2), largest terms first.
double row_sum(const Orbit& orbit, std::size_t first, std::size_t n) {
  CompensatedSum sum;
  const double tn = orbit.t(n);
  for (std::size_t k = n; k-- > first;) {
    const double gap = tn - orbit.t(k);
    const double sq = gap * gap;
    if (sq > 750.0) break;  // exp underflows to zero from here on
    sum += orbit.rho(k) * std::exp(-sq);
  }
  return sum.value();
}

// Twice-counted strict upper triangle plus diagonal over [first, last],
// with rows computed in parallel and combined in index order.
double gram_block_sum(const Orbit& orbit, std::size_t first, std::size_t last, unsigned threads,
                      std::vector<double>* prefix) {
  const std::size_t count = last - first + 1;
  std::vector<double> rows(count);
  for_each_chunk(count, 64, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t n = first + i;
      rows[i] = orbit.rho(n) * row_sum(orbit, first, n);
    }
  });
  CompensatedSum total;
  if (prefix) prefix->resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t n = first + i;
    total += 2.0 * rows[i];
    total += orbit.rho(n) * orbit.rho(n);
    if (prefix) (*prefix)[i] = total.value();
  }
  return total.value();
}

}  // namespace

CesaroTrace cesaro_norms(const Orbit& orbit, std::size_t upto, std::span<const std::size_t> probes,
                         const CesaroOptions& options) {
  if (upto == 0) throw std::invalid_argument("cesaro_norms needs upto >= 1");
  if (upto > orbit.size()) throw std::out_of_range("cesaro_norms: upto exceeds orbit length");

  CesaroTrace trace;
  std::vector<double> squared;
  gram_block_sum(orbit, 1, upto, options.threads, &squared);
  trace.y_norm.resize(upto);
  for (std::size_t n = 1; n <= upto; ++n)
    trace.y_norm[n - 1] = std::sqrt(std::max(0.0, squared[n - 1])) / static_cast<double>(n);

  trace.probe_indices.assign(probes.begin(), probes.end());
  std::sort(trace.probe_indices.begin(), trace.probe_indices.end());
  trace.probe_indices.erase(std::unique(trace.probe_indices.begin(), trace.probe_indices.end()),
                            trace.probe_indices.end());
  for (std::size_t p : trace.probe_indices) {
    if (p == 0 || p > orbit.size()) throw std::out_of_range("probe index outside the orbit");
    if (p > upto) trace.probe_norms.emplace_back(p, mean_norm(orbit, 1, p, options.threads));
  }

  if (options.block_means) {
    if (const BlockMeta* meta = orbit.mesh().block_meta()) {
      for (const auto& b : meta->blocks) {
        if (b.end > upto) break;
        trace.z_norm.push_back(block_mean_norm(orbit, b.k, options.threads));
      }
    }
  }
  return trace;
}

double mean_norm(const Orbit& orbit, std::size_t first, std::size_t last, unsigned threads) {
  require_index(orbit, first);
  require_index(orbit, last);
  if (last < first) throw std::invalid_argument("mean_norm needs first <= last");
  const double sq = gram_block_sum(orbit, first, last, threads, nullptr);
  return std::sqrt(std::max(0.0, sq)) / static_cast<double>(last - first + 1);
}

double mean_norm_direct(const Orbit& orbit, std::size_t first, std::size_t last) {
  require_index(orbit, first);
  require_index(orbit, last);
  if (last < first) throw std::invalid_argument("mean_norm_direct needs first <= last");
  CompensatedSum sum;
  for (std::size_t i = first; i <= last; ++i)
    for (std::size_t j = first; j <= last; ++j) sum += pair_inner(orbit, i, j);
  return std::sqrt(std::max(0.0, sum.value())) / static_cast<double>(last - first + 1);
}

double block_mean_norm(const Orbit& orbit, std::size_t k, unsigned threads) {
  const BlockMeta* meta = orbit.mesh().block_meta();
  if (meta == nullptr) throw std::invalid_argument("block means need a block mesh");
  const Block& b = meta->block(k);
  if (b.end > orbit.size()) throw std::out_of_range("block extends past the orbit");
  return mean_norm(orbit, b.start, b.end, threads);
}

LowerBoundSides cesaro_lower_bound_check(const Orbit& orbit, std::size_t n, std::span<const std::size_t> cluster,
                                         const CesaroTrace* trace, unsigned threads) {
  if (cluster.empty()) throw std::invalid_argument("index cluster must be nonempty");
  require_index(orbit, n);
  double lo_t = std::numeric_limits<double>::infinity();
  double hi_t = -std::numeric_limits<double>::infinity();
  for (std::size_t i : cluster) {
    if (i == 0 || i > n) throw std::out_of_range("cluster index outside 1..n");
    lo_t = std::min(lo_t, orbit.t(i));
    hi_t = std::max(hi_t, orbit.t(i));
  }
  std::vector<std::size_t> distinct(cluster.begin(), cluster.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  LowerBoundSides sides;
  sides.spread = hi_t - lo_t;
  sides.lhs = (trace && trace->has(n)) ? trace->norm_at(n) : mean_norm(orbit, 1, n, threads);
  sides.rhs = static_cast<double>(distinct.size()) / static_cast<double>(n) * orbit.rho_inf_bracket().lo *
              std::exp(-0.5 * sides.spread * sides.spread);
  return sides;
}

double weak_probe(const Orbit& orbit, double s, std::size_t n) {
  if (!(s >= 0.0)) throw std::invalid_argument("probe parameter must be non-negative");
  require_index(orbit, n);
  const double gap = s - orbit.t(n);
  return orbit.rho(n) * std::exp(-gap * gap);
}

}  // namespace fne
