#include "fne/curve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "fne/quadrature.hpp"

namespace fne::curve {

double kernel(double s, double t) {
  const double gap = s - t;
  return std::exp(-gap * gap);
}

double chord_distance(double s, double t) { return std::sqrt(2.0 * (1.0 - kernel(s, t))); }

double coord_component(std::size_t k, double t) {
  if (t == 0.0) return k == 0 ? 1.0 : 0.0;
  const auto kk = static_cast<double>(k);
  const double log_mag =
      -t * t + 0.5 * (kk * std::numbers::ln2 - std::lgamma(kk + 1.0)) + kk * std::log(std::fabs(t));
  const double mag = std::exp(log_mag);
  return (t < 0.0 && k % 2 == 1) ? -mag : mag;
}

double exp_remainder_bound(double x, std::size_t order) {
  const auto next = static_cast<double>(order + 2);
  if (!(next > x)) return std::numeric_limits<double>::infinity();
  if (x == 0.0) return 0.0;
  // x^{K+1} / (K+1)! / (1 - x / (K+2))
  const auto k1 = static_cast<double>(order + 1);
  const double log_term = k1 * std::log(x) - std::lgamma(k1 + 1.0);
  return std::exp(log_term) / (1.0 - x / next);
}

std::size_t coord_truncation_index(double s_max, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("truncation tolerance must be positive");
  if (!(s_max > 0.0)) throw std::invalid_argument("truncation domain bound must be positive");
  // The full tail is at most K(s, t) <= 1.
  if (eps >= 1.0) return 0;
  const double x = 2.0 * s_max * s_max;
  std::size_t order = 0;
  while (exp_remainder_bound(x, order) > eps) {
    ++order;
    if (order > 100000) throw std::invalid_argument("truncation index does not converge");
  }
  return order;
}

double coord_inner_truncated(double s, double t, std::size_t order) {
  double sum = 0.0;
  for (std::size_t k = 0; k <= order; ++k) sum += coord_component(k, s) * coord_component(k, t);
  return sum;
}

double l2_point_eval(double t, double r) {
  const double gap = r - 2.0 * t;
  return std::exp(-0.5 * gap * gap) / std::pow(std::numbers::pi, 0.25);
}

QuadratureSpec QuadratureSpec::covering(double s, double t, double half_width, double panel_width,
                                        std::size_t order) {
  QuadratureSpec q;
  q.lo = 2.0 * std::min(s, t) - half_width;
  q.hi = 2.0 * std::max(s, t) + half_width;
  q.panels = static_cast<std::size_t>(std::ceil((q.hi - q.lo) / panel_width));
  q.order = order;
  return q;
}

double l2_inner_quadrature(double s, double t, const QuadratureSpec& quad) {
  if (quad.lo > 2.0 * std::min(s, t) - kMinWindowHalfWidth ||
      quad.hi < 2.0 * std::max(s, t) + kMinWindowHalfWidth)
    throw std::invalid_argument("quadrature window must extend 9 widths past both centres");
  if (quad.panels == 0 || quad.order == 0) throw std::invalid_argument("empty quadrature rule");
  const GaussLegendreRule rule(quad.order);
  return rule.integrate([&](double r) { return l2_point_eval(s, r) * l2_point_eval(t, r); }, quad.lo,
                        quad.hi, quad.panels);
}

double l2_inner_quadrature(double s, double t) {
  return l2_inner_quadrature(s, t, QuadratureSpec::covering(s, t));
}

double DerivativeResiduals::max() const {
  return std::max({tangent_orthogonal, derivative_gram, speed, derivative_gap, chord_speed});
}

DerivativeResiduals derivative_identities(double s, double t, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw std::invalid_argument("finite-difference step must lie in [1e-7, 1e-3]");
  if (!(s >= 0.0 && t >= 0.0)) throw std::invalid_argument("curve parameters must be non-negative");

  // Tail of the derivative series carries an extra factor of order k / t,
  // so truncate well past the value needed for the curve itself.
  const std::size_t order = coord_truncation_index(std::max({s, t, 1.0}) + h, 1e-18) + 32;

  std::vector<double> us(order + 1), ut(order + 1), vs(order + 1), vt(order + 1);
  for (std::size_t k = 0; k <= order; ++k) {
    us[k] = coord_component(k, s);
    ut[k] = coord_component(k, t);
    vs[k] = (coord_component(k, s + h) - coord_component(k, s - h)) / (2.0 * h);
    vt[k] = (coord_component(k, t + h) - coord_component(k, t - h)) / (2.0 * h);
  }

  double vs_us = 0.0, vt_ut = 0.0, vs_vt = 0.0, vs_vs = 0.0, vt_vt = 0.0, gap2 = 0.0;
  for (std::size_t k = 0; k <= order; ++k) {
    vs_us += vs[k] * us[k];
    vt_ut += vt[k] * ut[k];
    vs_vt += vs[k] * vt[k];
    vs_vs += vs[k] * vs[k];
    vt_vt += vt[k] * vt[k];
    const double g = vs[k] - vt[k];
    gap2 += g * g;
  }

  const double D = s - t;
  const double gram = (2.0 - 4.0 * D * D) * std::exp(-D * D);
  const double root2 = std::numbers::sqrt2;

  DerivativeResiduals r;
  r.tangent_orthogonal = std::max(std::fabs(vs_us), std::fabs(vt_ut));
  r.derivative_gram = std::fabs(vs_vt - gram);
  r.speed = std::max(std::fabs(std::sqrt(vs_vs) - root2), std::fabs(std::sqrt(vt_vt) - root2));
  r.derivative_gap = std::fabs(gap2 - (4.0 - 2.0 * gram));
  // ||u(t+h) - u(t)||^2 = 2 (1 - exp(-h^2)) = -2 expm1(-h^2)
  r.chord_speed = std::fabs(std::sqrt(-2.0 * std::expm1(-h * h)) / h - root2);
  return r;
}

}  // namespace fne::curve
