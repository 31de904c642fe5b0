#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fne/orbit.hpp"
#include "fne/report.hpp"

namespace fne::verify {

// (1 + 32x) - exp(2x + 16x^2) for 0 <= x <= 1/16; throws outside that range.
double check_exp_ineq(double x);

// 2 - exp(x) - exp(-y) for 0 <= x <= 1/16 and y >= x + 16x^2; throws otherwise.
double check_expexp(double x, double y);

struct SumSides {
  double lhs;  // max_i sum_j exp(-(s_i - s_j)^2), brute force
  double rhs;  // (1 + sqrt(pi)) / alpha
};

// Points must be increasing with every gap >= alpha, alpha in (0, 1].
SumSides check_sep_sum(std::span<const double> points, double alpha);

// max_i sum_j exp(-(s_i - s_j)^2) accumulated over j < i once and shared
// between the two rows. Independent route for check_sep_sum's lhs.
double sep_sum_symmetric(std::span<const double> points);

struct SuiteOptions {
  std::uint64_t seed = 0;
  unsigned threads = 1;
  std::size_t pair_budget = 4'000'000;
  std::size_t firm_exhaustive_max = 2000;  // every pair m < n <= this is swept
  double identity_tol = 1e-12;             // relative, for equalities
  double inequality_tol = 1e-13;           // absolute, for theorem inequalities
  std::vector<std::int64_t> q_override;    // block suite only, Q_2, Q_3, ...
};

// Harmonic mesh d_n = delta / n with n_steps increments; the Cesaro checks
// cover n = 1..n_steps.
VerificationReport suite_harmonic(double delta, std::size_t n_steps, const SuiteOptions& options = {});

// Block mesh with Q_1 = q1 truncated after `blocks` blocks.
VerificationReport suite_block(std::int64_t q1, std::size_t blocks, const SuiteOptions& options = {});

struct AuxiliaryOptions {
  std::uint64_t seed = 0;
  std::size_t exp_grid = 1'000'000;
  std::size_t expexp_samples = 100'000;
  std::size_t sep_sets = 1000;
  std::size_t sep_max_points = 200;
};

VerificationReport suite_auxiliary(const AuxiliaryOptions& options = {});

struct RealizationOptions {
  std::uint64_t seed = 0;
  std::size_t coord_grid = 50;   // per axis on [0, 2]
  std::size_t l2_grid = 20;      // per axis on [0, 5]
  std::size_t derivative_pairs = 100;
  double step = 1e-5;
};

VerificationReport suite_realization(const RealizationOptions& options = {});

// Orbit-level checks shared by the mesh suites: rho recursion and decay,
// successor and orthogonality identities, Gram positivity, and the firm
// nonexpansiveness sweep.
void append_orbit_checks(VerificationReport& report, const Orbit& orbit, const SuiteOptions& options);

}  // namespace fne::verify
