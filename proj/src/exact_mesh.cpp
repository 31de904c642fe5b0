#include "fne/exact_mesh.hpp"

#include <gmpxx.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fne::exact {

namespace {

std::size_t bits(const mpq_class& q) {
  return std::max(mpz_sizeinbase(q.get_num_mpz_t(), 2), mpz_sizeinbase(q.get_den_mpz_t(), 2));
}

// |x - q| evaluated exactly, then rounded.
double abs_diff(double x, const mpq_class& q) {
  mpq_class diff = mpq_class(x) - q;
  return std::fabs(diff.get_d());
}

double rel_diff(double x, const mpq_class& q) {
  mpq_class r = mpq_class(x) / q - 1;
  return std::fabs(r.get_d());
}

mpq_class next_in_block(const mpq_class& d) {
  mpq_class out = d / (1 + 64 * d * d);
  out.canonicalize();
  return out;
}

}  // namespace

Comparison compare_harmonic(const Mesh& mesh, std::int64_t delta_num, std::int64_t delta_den,
                            std::size_t steps) {
  if (steps == 0 || steps > kMaxHarmonicSteps)
    throw std::invalid_argument("exact harmonic replay supports 1..2000 steps");
  if (steps > mesh.size()) throw std::invalid_argument("mesh shorter than requested replay");
  if (delta_num <= 0 || delta_den <= 0) throw std::invalid_argument("delta must be positive");

  const mpq_class delta(mpz_class(static_cast<long>(delta_num)), mpz_class(static_cast<long>(delta_den)));
  Comparison cmp;
  cmp.steps = steps;
  cmp.axioms_hold = delta <= mpq_class(1, 8);

  mpq_class t = 0;
  mpq_class prev_d;
  for (std::size_t n = 1; n <= steps; ++n) {
    mpq_class d = delta / n;
    d.canonicalize();
    cmp.max_knot_abs_error = std::max(cmp.max_knot_abs_error, abs_diff(mesh.t(n), t));
    cmp.max_increment_rel_error = std::max(cmp.max_increment_rel_error, rel_diff(mesh.d(n), d));
    if (n > 1 && d > next_in_block(prev_d)) cmp.axioms_hold = false;
    t += d;
    cmp.max_bits = std::max({cmp.max_bits, bits(t), bits(d)});
    prev_d = d;
  }
  cmp.max_knot_abs_error = std::max(cmp.max_knot_abs_error, abs_diff(mesh.t(steps + 1), t));
  return cmp;
}

Comparison compare_block(const Mesh& mesh, std::size_t steps, std::size_t max_bits) {
  const BlockMeta* meta = mesh.block_meta();
  if (meta == nullptr || mesh.kind() != MeshKind::block)
    throw std::invalid_argument("exact block replay needs a block mesh");
  if (steps == 0 || steps > mesh.size()) throw std::invalid_argument("replay length out of range");

  Comparison cmp;
  cmp.steps = steps;

  std::size_t k = 1;
  std::size_t width = 2;
  std::size_t start = 1;
  mpq_class t = 0;
  mpq_class t_start = 0;
  mpq_class d(1, static_cast<unsigned long>(mesh.q1()));
  cmp.axioms_hold = d <= mpq_class(1, 8);

  for (std::size_t n = 1; n <= steps; ++n) {
    cmp.max_knot_abs_error = std::max(cmp.max_knot_abs_error, abs_diff(mesh.t(n), t));
    cmp.max_increment_rel_error = std::max(cmp.max_increment_rel_error, rel_diff(mesh.d(n), d));
    t += d;
    cmp.max_bits = std::max({cmp.max_bits, bits(t), bits(d)});
    if (cmp.max_bits > max_bits) throw std::length_error("exact block replay exceeded bit budget");

    mpq_class next_d;
    const bool leave = t >= t_start + static_cast<long>(width);
    const bool float_leaves = meta->block(k).end == n;
    if (leave != float_leaves) cmp.block_decisions_match = false;
    if (!leave) {
      next_d = next_in_block(d);
    } else {
      // Q_{k+1} = ceil(max{i(k+1), 2^{k+2} w_{k+1}, (1 + 64 d^2) / d})
      mpq_class lower = mpq_class(static_cast<unsigned long>(n + 1));
      const mpq_class growth(mpz_class(mpz_class(1) << (k + 2)) * static_cast<unsigned long>(k + 2));
      const mpq_class step_bound((1 + 64 * d * d) / d);
      if (growth > lower) lower = growth;
      if (step_bound > lower) lower = step_bound;
      mpz_class q;
      mpz_cdiv_q(q.get_mpz_t(), lower.get_num_mpz_t(), lower.get_den_mpz_t());
      next_d = mpq_class(mpz_class(1), q);
      ++k;
      width = k + 1;
      start = n + 1;
      t_start = t;
      if (k <= meta->count() && meta->block(k).start != start) cmp.block_decisions_match = false;
    }
    if (next_d > next_in_block(d)) cmp.axioms_hold = false;
    d = next_d;
  }
  cmp.max_knot_abs_error = std::max(cmp.max_knot_abs_error, abs_diff(mesh.t(steps + 1), t));
  return cmp;
}

}  // namespace fne::exact
