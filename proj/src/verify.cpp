#include "fne/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "fne/curve.hpp"
#include "fne/pairs.hpp"

namespace fne::verify {

namespace {

constexpr double kSqrtPi = 1.7724538509055160273;  // sqrt(pi)
constexpr double kInf = std::numeric_limits<double>::infinity();

struct Worst {
  double value = kInf;
  std::size_t at = 0;
  void offer(double v, std::size_t n) {
    if (v != v) v = -kInf;
    if (at == 0 || v < value) {
      value = v;
      at = n;
    }
  }
};

}  // namespace

double check_exp_ineq(double x) {
  if (!(x >= 0.0 && x <= 1.0 / 16.0)) throw std::invalid_argument("check_exp_ineq needs 0 <= x <= 1/16");
  // (1 + 32x) - exp(w) = 32x - expm1(w)
  return 32.0 * x - std::expm1(2.0 * x + 16.0 * x * x);
}

double check_expexp(double x, double y) {
  if (!(x >= 0.0 && x <= 1.0 / 16.0)) throw std::invalid_argument("check_expexp needs 0 <= x <= 1/16");
  if (!(y >= x + 16.0 * x * x)) throw std::invalid_argument("check_expexp needs y >= x + 16 x^2");
  return -std::expm1(x) - std::expm1(-y);
}

SumSides check_sep_sum(std::span<const double> points, double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw std::invalid_argument("separation alpha must lie in (0, 1]");
  if (points.empty()) throw std::invalid_argument("check_sep_sum needs at least one point");
  if (points.front() < 0.0) throw std::invalid_argument("points must be non-negative");
  for (std::size_t i = 1; i < points.size(); ++i)
    if (!(points[i] - points[i - 1] >= alpha))
      throw std::invalid_argument("points closer than alpha at index " + std::to_string(i));

  double lhs = 0.0;
  for (double si : points) {
    double row = 0.0;
    for (double sj : points) row += curve::kernel(si, sj);
    lhs = std::max(lhs, row);
  }
  return {lhs, (1.0 + kSqrtPi) / alpha};
}

double sep_sum_symmetric(std::span<const double> points) {
  std::vector<double> rows(points.size(), 1.0);
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j) {
      const double k = curve::kernel(points[i], points[j]);
      rows[i] += k;
      rows[j] += k;
    }
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

void append_orbit_checks(VerificationReport& report, const Orbit& orbit, const SuiteOptions& options) {
  const std::size_t L = orbit.size();
  const double id_tol = options.identity_tol;

  report.add("orbit.rho_recursion", -orbit.max_rho_deviation(), id_tol, {{"points", L}});

  Worst decay;
  for (std::size_t n = 1; n < L; ++n) decay.offer(orbit.rho(n) - orbit.rho(n + 1), n);
  report.add("orbit.rho_decreasing", decay.value, 0.0, {{"n", decay.at}});

  const RhoBracket bracket = orbit.rho_inf_bracket();
  report.add("orbit.rho_inf_lower_positive", bracket.lo, 0.0,
             {{"lo", bracket.lo}, {"hi", bracket.hi}, {"tail_bound", orbit.tail_bound()}});

  Worst successor, orthogonal, acute;
  for (std::size_t n = 1; n < L; ++n) {
    const auto r = orbit_identities(orbit, n);
    successor.offer(-r.successor_gram, n);
    orthogonal.offer(-r.orthogonality, n);
    acute.offer(r.min_gram, n);
  }
  report.add("orbit.successor_gram", successor.value, id_tol, {{"n", successor.at}});
  report.add("orbit.orthogonality", orthogonal.value, id_tol, {{"n", orthogonal.at}});
  report.add("orbit.acute_gram", acute.value, 0.0, {{"n", acute.at}});

  // Every pair m < n <= n_max needs x_{n+1}, so n_max <= L - 1.
  const std::size_t n_max = L - 1;
  const std::size_t sweep_hi = std::min(options.firm_exhaustive_max, n_max);
  auto firm = [&](std::size_t m, std::size_t n) { return firm_residual(orbit, m, n); };
  if (sweep_hi >= 2) {
    PairPlan all;
    all.lo = 1;
    all.hi = sweep_hi;
    const auto best = min_over_pairs(all, options.threads, firm);
    report.add("orbit.firm_residual", best.value, id_tol,
               {{"m", best.m}, {"n", best.n}, {"pairs", best.evaluated}, {"n_max", sweep_hi}});
  }
  if (n_max > sweep_hi) {
    const auto plan = plan_pairs(1, n_max, options.pair_budget, options.seed);
    const auto best = min_over_pairs(plan, options.threads, firm);
    report.add("orbit.firm_residual_sampled", best.value, id_tol,
               {{"m", best.m}, {"n", best.n}, {"pairs", best.evaluated}, {"exhaustive", plan.exhaustive}});
  }
  Worst at_infinity;
  for (std::size_t m = 1; m <= n_max; ++m) at_infinity.offer(-std::fabs(firm_residual(orbit, m, kInfinity)), m);
  report.add("orbit.firm_residual_infinity", at_infinity.value, 1e-15, {{"m", at_infinity.at}});
}

namespace {

void append_streaming_crosscheck(VerificationReport& report, const Orbit& orbit, const CesaroTrace& trace) {
  Worst diff;
  for (std::size_t n : {std::size_t{1}, std::size_t{2}, std::size_t{10}, std::size_t{100}, std::size_t{1000}}) {
    if (n > trace.upto()) continue;
    const double direct = mean_norm_direct(orbit, 1, n);
    diff.offer(-std::fabs(trace.norm_at(n) / direct - 1.0), n);
  }
  report.add("cesaro.streaming_vs_direct", diff.value, 1e-10, {{"n", diff.at}});
}

// Decay of <u(s), x_n> once t_n has passed s, and the far-field bound.
void append_weak_probe_checks(VerificationReport& report, const Orbit& orbit, double s) {
  const std::size_t L = orbit.size();
  Worst monotone, envelope;
  double far_max = 0.0;
  std::size_t far_count = 0;
  for (std::size_t n = 1; n <= L; ++n) {
    const double v = weak_probe(orbit, s, n);
    const double gap = s - orbit.t(n);
    envelope.offer(std::exp(-gap * gap) - v, n);
    if (n < L && orbit.t(n) >= s) monotone.offer(v - weak_probe(orbit, s, n + 1), n);
    if (orbit.t(n) >= s + 2.0) {
      far_max = std::max(far_max, v);
      ++far_count;
    }
  }
  report.add("weak.probe_envelope", envelope.value, 0.0, {{"s", s}, {"n", envelope.at}});
  if (monotone.at != 0) report.add("weak.probe_monotone", monotone.value, 0.0, {{"s", s}, {"n", monotone.at}});
  report.add("weak.probe_far", 0.1 - far_max, 0.0, {{"s", s}, {"indices", far_count}});
}

}  // namespace

VerificationReport suite_harmonic(double delta, std::size_t n_steps, const SuiteOptions& options) {
  if (n_steps < 2) throw std::invalid_argument("suite_harmonic needs N >= 2");
  VerificationReport report("harmonic", options.seed);

  Mesh mesh = build_harmonic_mesh(delta, n_steps);
  MeshValidationOptions mesh_options;
  mesh_options.tol = options.identity_tol;
  mesh_options.pair_budget = options.pair_budget;
  mesh_options.seed = options.seed;
  mesh_options.threads = options.threads;
  report.merge(validate_mesh(mesh, mesh_options));

  const Orbit orbit(std::move(mesh));
  append_orbit_checks(report, orbit, options);

  const double rho_inf = std::exp(-delta * delta * std::numbers::pi * std::numbers::pi / 6.0);
  const RhoBracket bracket = orbit.rho_inf_bracket();
  report.add("orbit.rho_inf_in_bracket", std::min(rho_inf - bracket.lo, bracket.hi - rho_inf),
             options.inequality_tol, {{"rho_inf", rho_inf}, {"lo", bracket.lo}, {"hi", bracket.hi}});
  const double last = orbit.rho(orbit.size());
  report.add("orbit.rho_limit_gap", orbit.tail_bound() - std::fabs(last - rho_inf), options.inequality_tol,
             {{"rho_last", last}, {"rho_inf", rho_inf}, {"tail_bound", orbit.tail_bound()}});

  CesaroOptions cesaro;
  cesaro.threads = options.threads;
  const CesaroTrace trace = cesaro_norms(orbit, n_steps, {}, cesaro);

  report.add("cesaro.first_mean_unit", -std::fabs(trace.norm_at(1) - 1.0), options.identity_tol);

  const double floor = 0.5 * std::exp(-delta * delta * (std::numbers::pi * std::numbers::pi + 3.0) / 6.0);
  Worst above_floor;
  for (std::size_t n = 1; n <= n_steps; ++n) above_floor.offer(trace.norm_at(n) - floor, n);
  report.add("cesaro.harmonic_floor", above_floor.value, options.inequality_tol,
             {{"n", above_floor.at}, {"floor", floor}, {"min_norm", above_floor.value + floor}});

  Worst spread, cluster;
  std::vector<std::size_t> upper;
  for (std::size_t n = 1; n <= n_steps; ++n) {
    upper.clear();
    for (std::size_t i = n / 2 + 1; i <= n; ++i) upper.push_back(i);
    if (n >= 2) spread.offer(delta - (orbit.t(n) - orbit.t(n / 2 + 1)), n);
    const auto sides = cesaro_lower_bound_check(orbit, n, upper, &trace);
    cluster.offer(sides.lhs - sides.rhs, n);
  }
  report.add("cesaro.upper_half_spread", spread.value, 0.0, {{"n", spread.at}});
  report.add("cesaro.cluster_bound", cluster.value, options.inequality_tol, {{"n", cluster.at}});
  append_streaming_crosscheck(report, orbit, trace);

  append_weak_probe_checks(report, orbit, 0.0);
  append_weak_probe_checks(report, orbit, 0.5 * orbit.t(orbit.size()));
  return report;
}

VerificationReport suite_block(std::int64_t q1, std::size_t blocks, const SuiteOptions& options) {
  if (blocks < 2) throw std::invalid_argument("suite_block needs at least two blocks");
  VerificationReport report("block", options.seed);

  BlockMeshOptions block_options;
  block_options.q_override = options.q_override;
  Mesh mesh = build_block_mesh(q1, blocks, block_options);
  MeshValidationOptions mesh_options;
  mesh_options.tol = options.identity_tol;
  mesh_options.pair_budget = options.pair_budget;
  mesh_options.seed = options.seed;
  mesh_options.threads = options.threads;
  report.merge(validate_mesh(mesh, mesh_options));

  const Orbit orbit(std::move(mesh));
  const Mesh& m = orbit.mesh();
  const BlockMeta& meta = *m.block_meta();
  append_orbit_checks(report, orbit, options);

  const double q1d = static_cast<double>(q1);
  const double rho_floor = std::exp(-(1.0 / (q1d * q1d) + 7.0 / 12.0));
  report.add("orbit.rho_inf_floor", orbit.rho_inf_bracket().lo - rho_floor, 0.0,
             {{"lo", orbit.rho_inf_bracket().lo}, {"floor", rho_floor}});

  const std::size_t N = m.size();
  CesaroOptions cesaro;
  cesaro.threads = options.threads;
  const CesaroTrace trace = cesaro_norms(orbit, N, {}, cesaro);
  report.add("cesaro.first_mean_unit", -std::fabs(trace.norm_at(1) - 1.0), options.identity_tol);
  append_streaming_crosscheck(report, orbit, trace);

  const double rho_lo = orbit.rho_inf_bracket().lo;
  const double cluster_decay = std::exp(-81.0 / 128.0);  // exp(-(9/8)^2 / 2)
  const auto drift = drift_sequence(m);
  const double tol = options.inequality_tol;

  std::vector<double> y_unit, y_end, unit_threshold;
  for (const Block& b : meta.blocks) {
    const nlohmann::json at = {{"k", b.k}, {"Q", b.q}, {"w", b.width}, {"i", b.start},
                               {"j_unit", b.unit_end}, {"j_end", b.end}};
    auto params = [&](nlohmann::json extra) {
      nlohmann::json p = at;
      if (extra.is_object()) p.update(extra);
      return p;
    };
    const double Q = static_cast<double>(b.q);
    const double w = static_cast<double>(b.width);

    double q_floor = 8.0;
    if (b.k >= 2) {
      const double prev = m.d(b.start - 1);
      q_floor = std::max({static_cast<double>(b.start), std::ldexp(w, static_cast<int>(b.k) + 1),
                          (1.0 + 64.0 * prev * prev) / prev});
    }
    report.add("block.q_admissible", Q - q_floor, 0.0, params({{"floor", q_floor}}));

    Worst upper, lower, constant;
    const double alpha = 1.0 / (Q + 64.0 * w);
    for (std::size_t n = b.start; n <= b.end; ++n) {
      upper.offer((1.0 / Q - m.d(n)) * Q, n);
      lower.offer((m.d(n) - alpha) / alpha, n);
      constant.offer(-std::fabs(drift[n - 1] - drift[b.start - 1]) / std::fabs(drift[b.start - 1]), n);
    }
    report.add("block.step_upper", upper.value, options.identity_tol, params({{"n", upper.at}}));
    report.add("block.step_lower", lower.value, 0.0, params({{"n", lower.at}}));
    report.add("block.drift_constant", constant.value, 1e-10, params({{"n", constant.at}}));
    if (b.k < meta.count()) {
      const double jump = drift[b.end] - drift[b.end - 1];
      report.add("block.drift_boundary_increase", jump / std::fabs(drift[b.end - 1]), 0.0,
                 params({{"jump", jump}}));
    }

    const double unit_size = static_cast<double>(b.unit_size());
    report.add("block.unit_size_lower", unit_size - Q, 0.0, params({{"size", b.unit_size()}}));
    report.add("block.unit_size_upper", Q + 65.0 - unit_size, 0.0, params({{"size", b.unit_size()}}));
    report.add("block.unit_end_index",
               static_cast<double>(b.start) + Q + 64.0 - static_cast<double>(b.unit_end), 0.0, params({}));
    report.add("block.size_lower", static_cast<double>(b.size()) - w * Q, 0.0, params({{"size", b.size()}}));
    report.add("block.unit_spread", 9.0 / 8.0 - (m.t(b.unit_end) - m.t(b.start)), 0.0, params({}));

    std::vector<std::size_t> unit_cluster;
    for (std::size_t n = b.start; n <= b.unit_end; ++n) unit_cluster.push_back(n);
    const auto sides = cesaro_lower_bound_check(orbit, b.unit_end, unit_cluster, &trace);
    report.add("block.cluster_bound", sides.lhs - sides.rhs, tol,
               params({{"lhs", sides.lhs}, {"rhs", sides.rhs}, {"spread", sides.spread}}));

    const double threshold = Q / (2.0 * Q + 64.0) * rho_lo * cluster_decay;
    const double yu = trace.norm_at(b.unit_end);
    report.add("block.unit_mean_lower", yu - threshold, tol, params({{"y", yu}, {"threshold", threshold}}));

    const double z = trace.z_norm.at(b.k - 1);
    const double z_bound = (1.0 + kSqrtPi) * (1.0 / w + 64.0 / Q);
    report.add("block.block_mean_upper", z_bound - z * z, tol, params({{"z_norm", z}, {"bound", z_bound}}));

    std::vector<double> knots(m.knots().begin() + static_cast<std::ptrdiff_t>(b.start - 1),
                              m.knots().begin() + static_cast<std::ptrdiff_t>(b.end));
    // Consecutive in-block gaps exceed 1/(Q + 64 w); use the stated alpha.
    double min_gap = kInf;
    for (std::size_t i = 1; i < knots.size(); ++i) min_gap = std::min(min_gap, knots[i] - knots[i - 1]);
    report.add("block.knot_separation", min_gap - alpha, 0.0, params({{"alpha", alpha}}));
    if (min_gap >= alpha) {
      const auto sep = check_sep_sum(knots, alpha);
      report.add("block.kernel_row_sum", sep.rhs - sep.lhs, tol, params({{"lhs", sep.lhs}, {"rhs", sep.rhs}}));
    }

    const double ye = trace.norm_at(b.end);
    report.add("block.end_mean_upper", 1.0 / w + z - ye, tol, params({{"y", ye}, {"z_norm", z}}));

    y_unit.push_back(yu);
    y_end.push_back(ye);
    unit_threshold.push_back(threshold);
  }

  Worst decreasing, above;
  for (std::size_t k = 1; k < y_end.size(); ++k) decreasing.offer(y_end[k - 1] - y_end[k], k);
  for (std::size_t k = 0; k < y_unit.size(); ++k) above.offer(y_unit[k] - unit_threshold[k], k + 1);
  report.add("block.end_means_decreasing", decreasing.value, 0.0, {{"k", decreasing.at}});
  report.add("block.end_mean_first_exceeds_last", y_end.front() - y_end.back(), 0.0,
             {{"first", y_end.front()}, {"last", y_end.back()}});
  report.add("block.unit_means_above_threshold", above.value, tol, {{"k", above.at}});
  return report;
}

VerificationReport suite_auxiliary(const AuxiliaryOptions& options) {
  VerificationReport report("auxiliary", options.seed);
  std::mt19937_64 rng(options.seed);
  constexpr double kTheoremTol = 1e-13;

  Worst grid;
  const std::size_t G = std::max<std::size_t>(options.exp_grid, 2);
  for (std::size_t i = 0; i < G; ++i) {
    const double x = (1.0 / 16.0) * static_cast<double>(i) / static_cast<double>(G - 1);
    grid.offer(check_exp_ineq(x), i + 1);
  }
  report.add("aux.exp_ineq_grid", grid.value, kTheoremTol, {{"points", G}, {"argmin", grid.at - 1}});

  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Worst pairs;
  for (std::size_t i = 0; i < options.expexp_samples; ++i) {
    const double x = unit(rng) / 16.0;
    const double slack = (i % 4 == 0) ? 0.0 : 2.0 * unit(rng) * unit(rng);
    const double y = x + 16.0 * x * x + slack;
    pairs.offer(check_expexp(x, y), i + 1);
  }
  report.add("aux.expexp_random", pairs.value, kTheoremTol, {{"samples", options.expexp_samples}});

  Worst sep, agree;
  std::vector<double> points;
  for (std::size_t set = 0; set < options.sep_sets; ++set) {
    const std::size_t n = 1 + static_cast<std::size_t>(unit(rng) * static_cast<double>(options.sep_max_points));
    const double alpha = std::max(1e-3, unit(rng));
    points.assign(1, 3.0 * unit(rng));
    for (std::size_t i = 1; i < std::min(n, options.sep_max_points); ++i) {
      const double extra = (unit(rng) < 0.5) ? 0.0 : alpha * unit(rng);
      double next = points.back() + alpha + extra;
      if (next - points.back() < alpha) next = std::nextafter(next, kInf);
      points.push_back(next);
    }
    const auto sides = check_sep_sum(points, alpha);
    sep.offer((sides.rhs - sides.lhs) / sides.rhs, set + 1);
    agree.offer(-std::fabs(sep_sum_symmetric(points) / sides.lhs - 1.0), set + 1);
  }
  report.add("aux.sep_sum_random", sep.value, kTheoremTol, {{"sets", options.sep_sets}, {"set", sep.at}});
  report.add("aux.sep_sum_symmetric", agree.value, 1e-12, {{"set", agree.at}});

  std::vector<double> integers(100);
  for (std::size_t i = 0; i < integers.size(); ++i) integers[i] = static_cast<double>(i);
  const auto sides = check_sep_sum(integers, 1.0);
  report.add("aux.sep_sum_integers", sides.rhs - sides.lhs, kTheoremTol, {{"lhs", sides.lhs}, {"rhs", sides.rhs}});
  return report;
}

VerificationReport suite_realization(const RealizationOptions& options) {
  VerificationReport report("realization", options.seed);

  const std::size_t order = curve::coord_truncation_index(2.0, 1e-12);
  Worst coord, under;
  const std::size_t G = std::max<std::size_t>(options.coord_grid, 2);
  for (std::size_t i = 0; i < G; ++i)
    for (std::size_t j = 0; j < G; ++j) {
      const double s = 2.0 * static_cast<double>(i) / static_cast<double>(G - 1);
      const double t = 2.0 * static_cast<double>(j) / static_cast<double>(G - 1);
      const double partial = curve::coord_inner_truncated(s, t, order);
      const double exact = curve::kernel(s, t);
      coord.offer(-std::fabs(partial - exact), i * G + j + 1);
      under.offer(exact - partial, i * G + j + 1);
    }
  report.add("curve.coord_vs_kernel", coord.value, 1e-12, {{"order", order}, {"grid", G}});
  report.add("curve.coord_partial_below_kernel", under.value, 1e-15, {{"order", order}});

  Worst l2;
  const std::size_t H = std::max<std::size_t>(options.l2_grid, 2);
  for (std::size_t i = 0; i < H; ++i)
    for (std::size_t j = 0; j < H; ++j) {
      const double s = 5.0 * static_cast<double>(i) / static_cast<double>(H - 1);
      const double t = 5.0 * static_cast<double>(j) / static_cast<double>(H - 1);
      l2.offer(-std::fabs(curve::l2_inner_quadrature(s, t) - curve::kernel(s, t)), i * H + j + 1);
    }
  report.add("curve.l2_vs_kernel", l2.value, 1e-10, {{"grid", H}});

  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> draw(0.0, 3.0);
  Worst deriv;
  for (std::size_t i = 0; i < options.derivative_pairs; ++i) {
    const double s = draw(rng);
    const double t = draw(rng);
    deriv.offer(-curve::derivative_identities(s, t, options.step).max(), i + 1);
  }
  report.add("curve.derivative_identities", deriv.value, 1e-6,
             {{"pairs", options.derivative_pairs}, {"h", options.step}});

  Worst chord;
  for (std::size_t i = 0; i < 1000; ++i) {
    const double s = draw(rng);
    const double t = draw(rng);
    const double c = curve::chord_distance(s, t);
    chord.offer(-std::fabs(0.5 * c * c + curve::kernel(s, t) - 1.0), i + 1);
  }
  report.add("curve.chord_identity", chord.value, 4.0 * std::numeric_limits<double>::epsilon());
  return report;
}

}  // namespace fne::verify
