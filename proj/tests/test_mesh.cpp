#include <gtest/gtest.h>

#include <cmath>
#include <stdexcept>

#include "fne/exact_mesh.hpp"
#include "fne/mesh.hpp"
#include "fne/pairs.hpp"

using namespace fne;

namespace {

bool passed(const VerificationReport& r, const std::string& id) {
  const CheckRecord* rec = r.first(id);
  return rec != nullptr && rec->pass;
}

}  // namespace

TEST(HarmonicMesh, TwoSteps) {
  const Mesh m = build_harmonic_mesh(0.125, 2);
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m.d(1), 0.125);
  EXPECT_EQ(m.d(2), 0.0625);
  EXPECT_EQ(m.t(1), 0.0);
  EXPECT_EQ(m.t(2), 0.125);
  EXPECT_EQ(m.t(3), 0.1875);
  EXPECT_EQ(m.kind(), MeshKind::harmonic);
  EXPECT_EQ(m.block_meta(), nullptr);
}

TEST(HarmonicMesh, SingleStepStartsAtZero) {
  const Mesh m = build_harmonic_mesh(0.125, 1);
  EXPECT_EQ(m.t(1), 0.0);
}

TEST(HarmonicMesh, RejectsBadDelta) {
  EXPECT_THROW(build_harmonic_mesh(0.2, 10), std::invalid_argument);
  EXPECT_THROW(build_harmonic_mesh(0.0, 10), std::invalid_argument);
  EXPECT_THROW(build_harmonic_mesh(-0.1, 10), std::invalid_argument);
  EXPECT_THROW(build_harmonic_mesh(0.125, 0), std::invalid_argument);
  EXPECT_NO_THROW(build_harmonic_mesh(0.125, 1));
}

TEST(HarmonicMesh, KnotsMatchHarmonicNumbers) {
  const double delta = 0.1;
  const Mesh m = build_harmonic_mesh(delta, 50000);
  long double h = 0.0L;
  for (std::size_t k = 1; k <= m.size() + 1; ++k) {
    EXPECT_NEAR(m.t(k), static_cast<double>(delta * h), 1e-13) << k;
    h += 1.0L / static_cast<long double>(k);
  }
}

TEST(HarmonicMesh, ValidatesAtTenThousand) {
  const VerificationReport r = validate_mesh(build_harmonic_mesh(0.125, 10000));
  EXPECT_TRUE(r.all_passed()) << r.dump_json();
}

TEST(HarmonicMesh, MeshcoolMarginPositive) {
  const VerificationReport r = validate_mesh(build_harmonic_mesh(0.125, 1000));
  EXPECT_TRUE(r.all_passed());
  const CheckRecord* cool = r.first("mesh.meshcool");
  ASSERT_NE(cool, nullptr);
  EXPECT_GT(cool->margin, 0.0);
}

TEST(HarmonicMesh, ReciprocalGapIsOneOverDelta) {
  const double delta = 0.05;
  const Mesh m = build_harmonic_mesh(delta, 2000);
  for (std::size_t n = 1; n < m.size(); ++n) {
    const double gap = 1.0 / m.d(n + 1) - 1.0 / m.d(n);
    EXPECT_GE(gap - 64.0 * m.d(n), 1.0 / delta - 64.0 * delta - 1e-9) << n;
  }
}

TEST(HarmonicMesh, ExactRationalReplay) {
  const Mesh m = build_harmonic_mesh(0.125, exact::kMaxHarmonicSteps);
  const exact::Comparison c = exact::compare_harmonic(m, 1, 8, exact::kMaxHarmonicSteps);
  EXPECT_EQ(c.steps, exact::kMaxHarmonicSteps);
  EXPECT_TRUE(c.axioms_hold);
  EXPECT_LT(c.max_knot_abs_error, 1e-15);
  EXPECT_LT(c.max_increment_rel_error, 1e-15);
}

TEST(CustomMesh, FirstStepTooLarge) {
  const VerificationReport r = validate_mesh(Mesh::from_increments({0.2}));
  const CheckRecord* rec = r.first("mesh.dmesh0");
  ASSERT_NE(rec, nullptr);
  EXPECT_FALSE(rec->pass);
  EXPECT_NEAR(rec->margin, 0.125 - 0.2, 1e-15);
  EXPECT_THROW(require_mesh_axioms(Mesh::from_increments({0.2})), std::invalid_argument);
}

TEST(CustomMesh, FormsAgreeOnViolation) {
  const Mesh m = Mesh::from_increments({0.1, 0.1, 0.05});
  const auto forms = step_forms(m);
  ASSERT_GE(forms.size(), 1u);
  EXPECT_LT(forms[0].ratio_form, 0.0);
  EXPECT_LT(forms[0].reciprocal_form, 0.0);
  EXPECT_LT(forms[0].drift_form, 0.0);
  EXPECT_THROW(require_mesh_axioms(m), std::invalid_argument);
}

TEST(BlockMesh, FirstBlock) {
  const Mesh m = build_block_mesh(8, 1);
  const BlockMeta* meta = m.block_meta();
  ASSERT_NE(meta, nullptr);
  ASSERT_EQ(meta->count(), 1u);
  const Block& b = meta->block(1);
  EXPECT_EQ(b.start, 1u);
  EXPECT_EQ(m.d(1), 0.125);
  EXPECT_EQ(b.end, m.size());
  EXPECT_GE(m.t(b.end + 1), 2.0);
  EXPECT_LT(m.t(b.end), 2.0);
  EXPECT_GE(b.size(), 16u);
  EXPECT_LE(b.size(), 2u * (8 + 128) + 1);
}

TEST(BlockMesh, RejectsSmallQ1) {
  EXPECT_THROW(build_block_mesh(7, 2), std::invalid_argument);
  EXPECT_THROW(build_block_mesh(8, 0), std::invalid_argument);
}

TEST(BlockMesh, SecondQIsMinimalAdmissible) {
  const Mesh m = build_block_mesh(8, 2);
  const BlockMeta& meta = *m.block_meta();
  const Block& b2 = meta.block(2);
  const double d = m.d(b2.start - 1);
  const double bound = std::max({static_cast<double>(b2.start), 8.0 * 3.0, (1.0 + 64.0 * d * d) / d});
  EXPECT_EQ(b2.q, static_cast<std::int64_t>(std::ceil(bound)));
  EXPECT_EQ(m.d(b2.start), 1.0 / static_cast<double>(b2.q));
  EXPECT_EQ(minimal_next_q(b2.start, 2, d), b2.q);
}

TEST(BlockMesh, OverrideRespectsBound) {
  const Mesh base = build_block_mesh(8, 2);
  const std::int64_t q2 = base.block_meta()->block(2).q;
  BlockMeshOptions bigger;
  bigger.q_override = {q2 + 10};
  const Mesh m = build_block_mesh(8, 2, bigger);
  EXPECT_EQ(m.block_meta()->block(2).q, q2 + 10);
  EXPECT_TRUE(validate_mesh(m).all_passed());
  BlockMeshOptions smaller;
  smaller.q_override = {q2 - 1};
  EXPECT_THROW(build_block_mesh(8, 2, smaller), std::invalid_argument);
}

TEST(BlockMesh, MetaInvariants) {
  const Mesh m = build_block_mesh(8, 4);
  const BlockMeta& meta = *m.block_meta();
  ASSERT_EQ(meta.count(), 4u);
  std::size_t expected_start = 1;
  for (const Block& b : meta.blocks) {
    SCOPED_TRACE(b.k);
    EXPECT_EQ(b.start, expected_start);
    EXPECT_EQ(b.width, static_cast<std::int64_t>(b.k) + 1);
    const double Q = static_cast<double>(b.q);
    const double w = static_cast<double>(b.width);
    for (std::size_t n = b.start; n <= b.end; ++n) {
      ASSERT_LE(m.d(n), 1.0 / Q * (1.0 + 1e-15));
      ASSERT_GT(m.d(n), 1.0 / (Q + 64.0 * w));
      ASSERT_EQ(meta.block_of(n), b.k);
    }
    // j(k) by brute force
    std::size_t j = b.start;
    while (m.t(j) < m.t(b.start) + 1.0) ++j;
    EXPECT_EQ(b.unit_end, j);
    EXPECT_GE(b.unit_size(), static_cast<std::size_t>(b.q));
    EXPECT_LE(b.unit_size(), static_cast<std::size_t>(b.q) + 65);
    EXPECT_LE(b.unit_end, b.start + static_cast<std::size_t>(b.q) + 64);
    EXPECT_GE(static_cast<double>(b.size()), w * Q);
    // block exit
    EXPECT_GE(m.t(b.end + 1), m.t(b.start) + w);
    EXPECT_LT(m.t(b.end), m.t(b.start) + w);
    if (b.k >= 2) {
      const double d = m.d(b.start - 1);
      EXPECT_GE(Q, std::max({static_cast<double>(b.start), std::ldexp(w, static_cast<int>(b.k) + 1),
                             (1.0 + 64.0 * d * d) / d}));
    }
    expected_start = b.end + 1;
  }
  EXPECT_EQ(meta.block_of(m.size() + 1), 0u);
}

TEST(BlockMesh, InBlockUpdateRule) {
  const Mesh m = build_block_mesh(8, 3);
  const BlockMeta& meta = *m.block_meta();
  for (const Block& b : meta.blocks)
    for (std::size_t n = b.start; n < b.end; ++n) {
      const double d = m.d(n);
      ASSERT_NEAR(m.d(n + 1) / (d / (1.0 + 64.0 * d * d)), 1.0, 1e-15) << n;
    }
}

TEST(BlockMesh, ValidatesWithTwoBlocks) {
  const VerificationReport r = validate_mesh(build_block_mesh(8, 2));
  EXPECT_TRUE(r.all_passed()) << r.dump_json();
}

TEST(BlockMesh, ExactRationalReplay) {
  const Mesh m = build_block_mesh(8, 1);
  const exact::Comparison c = exact::compare_block(m, 16);
  EXPECT_EQ(c.steps, 16u);
  EXPECT_TRUE(c.axioms_hold);
  EXPECT_TRUE(c.block_decisions_match);
  EXPECT_LT(c.max_increment_rel_error, 1e-14);
  EXPECT_LT(c.max_knot_abs_error, 1e-14);
  EXPECT_THROW(exact::compare_block(m, 60, 4096), std::length_error);
}

TEST(MeshForms, AgreePerIndexOnBothFamilies) {
  const double tol = 1e-12;
  for (const Mesh& m : {build_harmonic_mesh(0.125, 10000), build_block_mesh(8, 4)}) {
    const auto forms = step_forms(m);
    ASSERT_EQ(forms.size(), m.size() - 1);
    for (std::size_t i = 0; i < forms.size(); ++i) {
      const bool a = forms[i].ratio_form >= -tol;
      const bool b = forms[i].reciprocal_form >= -tol;
      const bool c = forms[i].drift_form >= -tol;
      ASSERT_TRUE(a == b && b == c) << i;
      ASSERT_TRUE(a) << i;
    }
  }
}

TEST(MeshForms, DriftConstantInsideBlocks) {
  const Mesh m = build_block_mesh(8, 4);
  const auto drift = drift_sequence(m);
  for (const Block& b : m.block_meta()->blocks) {
    const double ref = drift[b.start - 1];
    for (std::size_t n = b.start; n <= b.end; ++n) ASSERT_LE(std::fabs(drift[n - 1] - ref), 1e-10 * std::fabs(ref));
    if (b.end < m.size()) EXPECT_GT(drift[b.end], drift[b.end - 1]);
  }
}

TEST(MeshForms, HarmonicDriftIncreases) {
  const Mesh m = build_harmonic_mesh(0.125, 5000);
  const auto drift = drift_sequence(m);
  for (std::size_t i = 1; i < drift.size(); ++i) ASSERT_GE(drift[i], drift[i - 1]);
}

TEST(MeshValidation, ThreadCountDoesNotChangeReport) {
  const Mesh m = build_harmonic_mesh(0.125, 4000);
  MeshValidationOptions one, four;
  one.pair_budget = four.pair_budget = 1'000'000;
  four.threads = 4;
  EXPECT_EQ(validate_mesh(m, one).dump_json(), validate_mesh(m, four).dump_json());
}

TEST(PairPlan, ExhaustiveBelowBudget) {
  const PairPlan p = plan_pairs(1, 100, 10000, 0);
  EXPECT_TRUE(p.exhaustive);
  EXPECT_EQ(p.count(), 100u * 99u / 2u);
  const auto best = min_over_pairs(p, 2, [&](std::size_t m, std::size_t n) {
    return static_cast<double>(n) - static_cast<double>(m);
  });
  EXPECT_EQ(best.evaluated, p.count());
  EXPECT_EQ(best.value, 1.0);
  EXPECT_EQ(best.m, 1u);
  EXPECT_EQ(best.n, 2u);
}

TEST(PairPlan, SampledIsSeededAndCoversNeighbours) {
  const PairPlan a = plan_pairs(1, 5000, 20000, 7);
  const PairPlan b = plan_pairs(1, 5000, 20000, 7);
  const PairPlan c = plan_pairs(1, 5000, 20000, 8);
  EXPECT_FALSE(a.exhaustive);
  EXPECT_EQ(a.sampled, b.sampled);
  EXPECT_NE(a.sampled, c.sampled);
  std::vector<bool> adjacent(5001, false);
  for (auto [m, n] : a.sampled) {
    ASSERT_LT(m, n);
    ASSERT_GE(m, 1u);
    ASSERT_LE(n, 5000u);
    if (n == m + 1) adjacent[m] = true;
  }
  for (std::size_t m = 1; m < 5000; ++m) ASSERT_TRUE(adjacent[m]) << m;
}
