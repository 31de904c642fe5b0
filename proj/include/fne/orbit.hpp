#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "fne/mesh.hpp"

namespace fne {

// Index of the weak limit x_inf = x_{inf+1} = 0.
inline constexpr std::size_t kInfinity = std::numeric_limits<std::size_t>::max();

struct RhoBracket {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return lo <= v && v <= hi; }
};

// The sequence x_n = rho_n u(t_n) over a mesh with N increments. It has
// N + 1 points, since d_N fixes t_{N+1} and rho_{N+1}. Points are never
// materialized; every inner product comes from
// <x_m, x_n> = rho_m rho_n exp(-(t_n - t_m)^2).
class Orbit {
 public:
  // Throws std::invalid_argument when the mesh breaks the O(N) axioms.
  // tail_bound overrides the upper bound on sum_{k > N} d_k^2; for custom
  // meshes without one the lower end of the rho_inf bracket is 0.
  explicit Orbit(Mesh mesh, std::optional<double> tail_bound = std::nullopt);

  const Mesh& mesh() const { return mesh_; }
  std::size_t size() const { return rho_.size(); }

  // 1 <= n <= size()
  double rho(std::size_t n) const { return rho_[n - 1]; }
  double log_rho(std::size_t n) const { return log_rho_[n - 1]; }
  double t(std::size_t n) const { return mesh_.t(n); }
  // rho_n from the product rho_{n+1} = rho_n exp(-d_n^2), kept for cross-checks.
  double rho_recursive(std::size_t n) const { return rho_product_[n - 1]; }

  // max_n |rho_recursive(n) / rho(n) - 1|
  double max_rho_deviation() const;

  // [rho_L exp(-tail), rho_L] with L = size().
  RhoBracket rho_inf_bracket() const { return bracket_; }
  double tail_bound() const { return tail_; }

 private:
  Mesh mesh_;
  std::vector<double> log_rho_;
  std::vector<double> rho_;
  std::vector<double> rho_product_;
  double tail_ = 0.0;
  RhoBracket bracket_;
};

Orbit build_orbit(Mesh mesh);

// <x_m, x_n>; 0 if either index is kInfinity. Throws std::out_of_range for a
// finite index outside 1..size().
double pair_inner(const Orbit& orbit, std::size_t m, std::size_t n);

// A finite linear combination sum_i coeff_i x_{index_i}.
struct Term {
  std::size_t index;
  double coeff;
};

// <sum a_i x_i, sum b_j x_j> by bilinear expansion over pair_inner.
double combination_inner(const Orbit& orbit, std::span<const Term> a, std::span<const Term> b);

struct IdentityResiduals {
  double successor_gram;  // |<x_{n+1}, x_n> - ||x_{n+1}||^2| / ||x_{n+1}||^2
  double orthogonality;   // |<x_{n+1} - x_n, x_{n+1}>| / ||x_{n+1}||^2
  double min_gram;        // smallest sampled <x_i, x_j> involving n
};

// Requires n + 1 <= size().
IdentityResiduals orbit_identities(const Orbit& orbit, std::size_t n);

// <x_{m+1} - x_{n+1}, (x_m - x_{m+1}) - (x_n - x_{n+1})> for 1 <= m < n,
// n possibly kInfinity. Non-negative for every admissible mesh: this is the
// firm nonexpansiveness of x_n -> x_{n+1}.
double firm_residual(const Orbit& orbit, std::size_t m, std::size_t n);

struct IdentitySides {
  double lhs;
  double rhs;
};

// For y = sum c_p x_p with c_p >= 0:
//   lhs = <x_{n+1} - y, x_n - x_{n+1}>,  rhs = <x_{n+1}, y> - <x_n, y>.
// They agree because <x_{n+1}, x_n - x_{n+1}> = 0. Throws on a negative
// coefficient.
IdentitySides cone_equivalence_residual(const Orbit& orbit, std::span<const Term> cone, std::size_t n);

// Norms of the Cesaro means y_n = (1/n) sum_{k <= n} x_k.
struct CesaroTrace {
  std::vector<double> y_norm;                               // y_norm[n - 1], n = 1..upto
  std::vector<std::pair<std::size_t, double>> probe_norms;  // exact norms at probes past upto
  std::vector<std::size_t> probe_indices;                   // every requested probe, sorted
  std::vector<double> z_norm;                               // z_norm[k - 1], complete blocks only

  std::size_t upto() const { return y_norm.size(); }
  bool has(std::size_t n) const;
  // Throws std::out_of_range when n was neither streamed nor probed.
  double norm_at(std::size_t n) const;
};

struct CesaroOptions {
  unsigned threads = 1;
  std::size_t rows_per_chunk = 64;
  bool block_means = true;  // fill z_norm for blocks ending at or before upto
};

// Streams ||s_n||^2 = ||s_{n-1}||^2 + 2 sum_{k<n} <x_k, x_n> + rho_n^2 for
// n <= upto, with s_n the partial sum; each row is summed sequentially so the
// result is independent of the thread count. Probes beyond upto are
// evaluated individually.
CesaroTrace cesaro_norms(const Orbit& orbit, std::size_t upto, std::span<const std::size_t> probes = {},
                         const CesaroOptions& options = {});

// || (1/(last-first+1)) sum_{first <= n <= last} x_n || from the symmetric
// Gram sum (diagonal plus twice the strict upper triangle).
double mean_norm(const Orbit& orbit, std::size_t first, std::size_t last, unsigned threads = 1);

// Same quantity from the full, unsymmetrized double sum in row-major
// order. Slower; used to cross-check the streaming recurrence.
double mean_norm_direct(const Orbit& orbit, std::size_t first, std::size_t last);

// ||z_k|| for block k of a block mesh. Throws std::invalid_argument for
// meshes without blocks and std::out_of_range for an incomplete block.
double block_mean_norm(const Orbit& orbit, std::size_t k, unsigned threads = 1);

struct LowerBoundSides {
  double lhs;     // ||y_n||
  double rhs;     // (#I / n) rho_inf_lo exp(-spread^2 / 2)
  double spread;  // max_{i,j in I} |t_i - t_j|
};

// Lower bound on ||y_n|| from a cluster I of nearby knots. lhs comes from
// the trace when it covers n and from mean_norm otherwise.
LowerBoundSides cesaro_lower_bound_check(const Orbit& orbit, std::size_t n, std::span<const std::size_t> cluster,
                                         const CesaroTrace* trace = nullptr, unsigned threads = 1);

// <u(s), x_n> = rho_n exp(-(s - t_n)^2).
double weak_probe(const Orbit& orbit, double s, std::size_t n);

}  // namespace fne
