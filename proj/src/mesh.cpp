#include "fne/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fne/pairs.hpp"
#include "fne/summation.hpp"

namespace fne {

const char* to_string(MeshKind kind) {
  switch (kind) {
    case MeshKind::harmonic: return "harmonic";
    case MeshKind::block: return "block";
    case MeshKind::custom: return "custom";
  }
  return "unknown";
}

const Block& BlockMeta::block(std::size_t k) const {
  if (k == 0 || k > blocks.size()) throw std::out_of_range("block index " + std::to_string(k));
  return blocks[k - 1];
}

std::size_t BlockMeta::block_of(std::size_t n) const {
  auto it = std::partition_point(blocks.begin(), blocks.end(),
                                 [n](const Block& b) { return b.end < n; });
  if (it == blocks.end() || !it->contains(n)) return 0;
  return it->k;
}

namespace {

std::vector<double> accumulate_knots(const std::vector<double>& d) {
  std::vector<double> t;
  t.reserve(d.size() + 1);
  CompensatedSum sum;
  t.push_back(0.0);
  for (double step : d) {
    sum += step;
    t.push_back(sum.value());
  }
  return t;
}

}  // namespace

Mesh Mesh::from_increments(std::vector<double> increments) {
  if (increments.empty()) throw std::invalid_argument("mesh needs at least one increment");
  auto t = accumulate_knots(increments);
  return Mesh(std::move(increments), std::move(t), MeshKind::custom);
}

Mesh build_harmonic_mesh(double delta, std::size_t n_steps) {
  if (!(delta > 0.0 && delta <= 0.125))
    throw std::invalid_argument("harmonic mesh needs delta in (0, 1/8], got " + format_double(delta));
  if (n_steps == 0) throw std::invalid_argument("harmonic mesh needs at least one step");
  std::vector<double> d(n_steps);
  for (std::size_t k = 1; k <= n_steps; ++k) d[k - 1] = delta / static_cast<double>(k);
  auto t = accumulate_knots(d);
  Mesh mesh(std::move(d), std::move(t), MeshKind::harmonic);
  mesh.delta_ = delta;
  return mesh;
}

std::int64_t minimal_next_q(std::size_t next_start, std::size_t next_k, double last_increment) {
  if (!(last_increment > 0.0)) throw std::invalid_argument("last increment must be positive");
  if (next_k < 2 || next_k > 60) throw std::invalid_argument("block index out of range");
  const double width = static_cast<double>(next_k + 1);
  const double growth = std::ldexp(width, static_cast<int>(next_k) + 1);  // 2^{k+2} w_{k+1}, k = next_k - 1
  const double step = (1.0 + 64.0 * last_increment * last_increment) / last_increment;
  const double lower = std::max({static_cast<double>(next_start), growth, step});
  if (lower > 9.0e15) throw std::overflow_error("Q exceeds exact integer range of binary64");
  return static_cast<std::int64_t>(std::ceil(lower));
}

struct BlockMeshBuilder {
  static Mesh build(std::int64_t q1, std::size_t num_blocks, const BlockMeshOptions& options) {
    if (q1 < 8) throw std::invalid_argument("block mesh needs q1 >= 8, got " + std::to_string(q1));
    if (num_blocks == 0) throw std::invalid_argument("block mesh needs at least one block");

    std::vector<double> d;
    std::vector<double> t{0.0};
    BlockMeta meta;
    CompensatedSum knot;

    std::size_t k = 1;
    std::int64_t q = q1;
    double step = 1.0 / static_cast<double>(q1);
    std::size_t n = 1;
    Block current{1, 2, q1, 1, 0, 0};

    for (;;) {
      d.push_back(step);
      knot += step;
      const double next_t = knot.value();
      t.push_back(next_t);

      const double t_start = t[current.start - 1];
      if (current.unit_end == 0 && t[n - 1] >= t_start + 1.0) current.unit_end = n;

      if (next_t < t_start + static_cast<double>(current.width)) {
        step = step / (1.0 + 64.0 * step * step);
        ++n;
        continue;
      }

      // n is the last index of block k.
      current.end = n;
      if (current.unit_end == 0) current.unit_end = n;  // unreachable for w_k >= 2
      meta.blocks.push_back(current);
      if (k == num_blocks) break;

      const std::size_t next_start = n + 1;
      const std::int64_t minimal = minimal_next_q(next_start, k + 1, step);
      q = minimal;
      if (k - 1 < options.q_override.size()) {
        const std::int64_t requested = options.q_override[k - 1];
        if (requested < minimal)
          throw std::invalid_argument("Q_" + std::to_string(k + 1) + " = " + std::to_string(requested) +
                                      " is below the admissible minimum " + std::to_string(minimal));
        q = requested;
      }
      ++k;
      ++n;
      step = 1.0 / static_cast<double>(q);
      current = Block{k, static_cast<std::int64_t>(k + 1), q, next_start, 0, 0};
    }

    Mesh mesh(std::move(d), std::move(t), MeshKind::block);
    mesh.q1_ = q1;
    mesh.meta_ = std::move(meta);
    return mesh;
  }
};

Mesh build_block_mesh(std::int64_t q1, std::size_t num_blocks, const BlockMeshOptions& options) {
  return BlockMeshBuilder::build(q1, num_blocks, options);
}

std::vector<StepForms> step_forms(const Mesh& mesh) {
  std::vector<StepForms> out;
  if (mesh.size() < 2) return out;
  out.reserve(mesh.size() - 1);
  for (std::size_t n = 1; n < mesh.size(); ++n) {
    const double dn = mesh.d(n);
    const double dn1 = mesh.d(n + 1);
    StepForms f;
    f.ratio_form = (dn / (1.0 + 64.0 * dn * dn) - dn1) / dn1;
    f.reciprocal_form = ((1.0 / dn1 - 1.0 / dn) - 64.0 * dn) * dn1;
    f.drift_form = ((1.0 / dn1 - 64.0 * mesh.t(n + 1)) - (1.0 / dn - 64.0 * mesh.t(n))) * dn1;
    out.push_back(f);
  }
  return out;
}

std::vector<double> drift_sequence(const Mesh& mesh) {
  std::vector<double> out(mesh.size());
  for (std::size_t n = 1; n <= mesh.size(); ++n) out[n - 1] = 1.0 / mesh.d(n) - 64.0 * mesh.t(n);
  return out;
}

namespace {

struct Worst {
  double value = std::numeric_limits<double>::infinity();
  std::size_t at = 0;
  void offer(double v, std::size_t n) {
    if (v != v) v = -std::numeric_limits<double>::infinity();
    if (at == 0 || v < value) {
      value = v;
      at = n;
    }
  }
};

}  // namespace

VerificationReport validate_mesh(const Mesh& mesh, const MeshValidationOptions& options) {
  VerificationReport report("mesh", options.seed);
  const std::size_t N = mesh.size();
  const double tol = options.tol;
  const nlohmann::json base = {{"kind", to_string(mesh.kind())}, {"size", N}};
  auto with = [&](nlohmann::json extra) {
    nlohmann::json p = base;
    p.update(extra);
    return p;
  };

  Worst positive;
  for (std::size_t n = 1; n <= N; ++n) positive.offer(mesh.d(n), n);
  report.add("mesh.positive", positive.value, 0.0, with({{"n", positive.at}}));

  report.add("mesh.dmesh0", 0.125 - mesh.d(1), 0.0, with({{"d1", mesh.d(1)}}));

  const auto forms = step_forms(mesh);
  Worst ratio, reciprocal, drift, decreasing;
  std::size_t disagreements = 0;
  for (std::size_t i = 0; i < forms.size(); ++i) {
    const std::size_t n = i + 1;
    ratio.offer(forms[i].ratio_form, n);
    reciprocal.offer(forms[i].reciprocal_form, n);
    drift.offer(forms[i].drift_form, n);
    decreasing.offer((mesh.d(n) - mesh.d(n + 1)) / mesh.d(n), n);
    const bool a = forms[i].ratio_form >= -tol;
    const bool b = forms[i].reciprocal_form >= -tol;
    const bool c = forms[i].drift_form >= -tol;
    if (a != b || b != c) ++disagreements;
  }
  if (!forms.empty()) {
    report.add("mesh.dmeshnew", ratio.value, tol, with({{"n", ratio.at}}));
    report.add("mesh.dmeshold", reciprocal.value, tol, with({{"n", reciprocal.at}}));
    report.add("mesh.dntninc", drift.value, tol, with({{"n", drift.at}}));
    report.add("mesh.forms_agree", -static_cast<double>(disagreements), 0.0,
               with({{"indices", forms.size()}}));
    report.add("mesh.strictly_decreasing", decreasing.value, 0.0, with({{"n", decreasing.at}}));
  }

  Worst knot_gap, increasing, dmesh2;
  for (std::size_t n = 1; n <= N; ++n) {
    knot_gap.offer(-std::fabs((mesh.t(n + 1) - mesh.t(n)) - mesh.d(n)), n);
    increasing.offer(mesh.t(n + 1) - mesh.t(n), n);
    dmesh2.offer(1.0 / 32.0 - mesh.d(n) * mesh.t(n + 1), n);
  }
  const double knot_tol = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, mesh.t(N + 1));
  report.add("mesh.tndn", knot_gap.value, knot_tol, with({{"n", knot_gap.at}}));
  report.add("mesh.t_increasing", increasing.value, 0.0, with({{"n", increasing.at}}));
  report.add("mesh.dmesh2", dmesh2.value, 0.0, with({{"n", dmesh2.at}}));

  if (N >= 2) {
    const auto plan = plan_pairs(1, N, options.pair_budget, options.seed);
    const auto dmesh1 = min_over_pairs(plan, options.threads, [&](std::size_t m, std::size_t n) {
      return ((1.0 / mesh.d(n) - 1.0 / mesh.d(m)) - 64.0 * (mesh.t(n) - mesh.t(m))) * mesh.d(n);
    });
    report.add("mesh.dmesh1", dmesh1.value, tol,
               with({{"m", dmesh1.m}, {"n", dmesh1.n}, {"pairs", dmesh1.evaluated},
                     {"exhaustive", plan.exhaustive}}));

    const auto cool = min_over_pairs(plan, options.threads, [&](std::size_t m, std::size_t n) {
      const double gap = mesh.t(n + 1) - mesh.t(m + 1);
      return -std::expm1(2.0 * mesh.d(n) * gap) - std::expm1(-2.0 * mesh.d(m) * gap);
    });
    report.add("mesh.meshcool", cool.value, 1e-13,
               with({{"m", cool.m}, {"n", cool.n}, {"pairs", cool.evaluated},
                     {"exhaustive", plan.exhaustive}}));
  }
  return report;
}

void require_mesh_axioms(const Mesh& mesh, double tol) {
  if (mesh.size() == 0) throw std::invalid_argument("empty mesh");
  for (std::size_t n = 1; n <= mesh.size(); ++n)
    if (!(mesh.d(n) > 0.0))
      throw std::invalid_argument("mesh increment d_" + std::to_string(n) + " is not positive");
  if (mesh.d(1) > 0.125)
    throw std::invalid_argument("mesh violates d_1 <= 1/8 (d_1 = " + format_double(mesh.d(1)) + ")");
  const auto forms = step_forms(mesh);
  for (std::size_t i = 0; i < forms.size(); ++i)
    if (forms[i].ratio_form < -tol)
      throw std::invalid_argument("mesh violates d_{n+1} <= d_n / (1 + 64 d_n^2) at n = " +
                                  std::to_string(i + 1));
}

}  // namespace fne
