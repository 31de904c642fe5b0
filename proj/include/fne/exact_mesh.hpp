#pragma once

#include <cstddef>
#include <cstdint>

#include "fne/mesh.hpp"

// Exact rational replay of the mesh constructions, used as a debugging
// oracle for the binary64 meshes. Harmonic knots stay cheap for a few
// thousand steps; the in-block update d -> d / (1 + 64 d^2) roughly doubles
// the bit length of d per step, so block replays are only practical for a
// few dozen steps.
namespace fne::exact {

struct Comparison {
  std::size_t steps = 0;
  double max_knot_abs_error = 0.0;       // max |t_n (float) - t_n (exact)|
  double max_increment_rel_error = 0.0;  // max |d_n (float) / d_n (exact) - 1|
  std::size_t max_bits = 0;              // largest numerator/denominator seen
  bool axioms_hold = false;              // d_1 <= 1/8 and the step rule, exactly
  bool block_decisions_match = true;     // block exits agree with the float mesh
};

inline constexpr std::size_t kMaxHarmonicSteps = 2000;

// Exact harmonic mesh with delta = delta_num / delta_den, compared with the
// first `steps` increments of `mesh`.
Comparison compare_harmonic(const Mesh& mesh, std::int64_t delta_num, std::int64_t delta_den,
                            std::size_t steps);

// Exact replay of the block construction for the first `steps` increments.
// Throws std::length_error when an intermediate exceeds max_bits.
Comparison compare_block(const Mesh& mesh, std::size_t steps, std::size_t max_bits = 1u << 20);

}  // namespace fne::exact
