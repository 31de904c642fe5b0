#pragma once

#include <cstddef>

namespace fne::curve {

// Gaussian kernel K(s, t) = exp(-(s - t)^2), the inner product of the unit
// vectors u(s) and u(t).
double kernel(double s, double t);

// ||u(s) - u(t)|| = sqrt(2 (1 - K(s, t))).
double chord_distance(double s, double t);

// --- Coordinate realization: u(t) = sum_k u_k(t) e_k ------------------------

// u_k(t) = exp(-t^2) sqrt(2^k / k!) t^k, evaluated through its logarithm.
// Negative t is accepted (odd k flips sign) so finite differences can step
// across t = 0.
double coord_component(std::size_t k, double t);

// Smallest K such that sum_{k > K} u_k(s) u_k(t) <= eps for all
// 0 <= s, t <= s_max, using the exponential-series remainder bound at
// x = 2 s_max^2. Throws std::invalid_argument for eps <= 0 or s_max <= 0.
std::size_t coord_truncation_index(double s_max, double eps);

// Upper bound on the remainder of exp(x) after the degree-K term; infinite
// when the bound does not apply (K + 2 <= x).
double exp_remainder_bound(double x, std::size_t order);

// sum_{k=0}^{order} u_k(s) u_k(t).
double coord_inner_truncated(double s, double t, std::size_t order);

// --- L^2(R) realization: u(t)(r) = pi^{-1/4} exp(-(r - 2t)^2 / 2) -----------

double l2_point_eval(double t, double r);

struct QuadratureSpec {
  double lo = 0.0;
  double hi = 0.0;
  std::size_t panels = 0;
  std::size_t order = 20;

  // Window [2 min(s,t) - half_width, 2 max(s,t) + half_width] with panels of
  // width at most panel_width.
  static QuadratureSpec covering(double s, double t, double half_width = 9.0,
                                 double panel_width = 0.5, std::size_t order = 20);
};

inline constexpr double kMinWindowHalfWidth = 9.0;

// Integral of u(s)(r) u(t)(r) dr by composite Gauss-Legendre. Throws
// std::invalid_argument when the window does not reach kMinWindowHalfWidth
// beyond both centres.
double l2_inner_quadrature(double s, double t, const QuadratureSpec& quad);
double l2_inner_quadrature(double s, double t);

// --- Derivative identities ---------------------------------------------------

struct DerivativeResiduals {
  double tangent_orthogonal;  // |<u'(t), u(t)>| (worst of s and t)
  double derivative_gram;     // |<u'(s), u'(t)> - (2 - 4 D^2) exp(-D^2)|
  double speed;               // | ||u'(t)|| - sqrt 2 | (worst of s and t)
  double derivative_gap;      // | ||u'(s) - u'(t)||^2 - (4 - 2 (2 - 4 D^2) exp(-D^2)) |
  double chord_speed;         // | ||u(t + h) - u(t)|| / h - sqrt 2 | from the chord metric

  double max() const;
};

inline constexpr double kDefaultStep = 1e-5;

// Derivatives by central differences of the coordinate components
// (truncated far enough that the tail is below rounding). Throws
// std::invalid_argument unless h is in [1e-7, 1e-3] and s, t >= 0.
DerivativeResiduals derivative_identities(double s, double t, double h = kDefaultStep);

}  // namespace fne::curve
