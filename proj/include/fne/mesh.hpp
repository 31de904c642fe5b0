#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "fne/report.hpp"

namespace fne {

enum class MeshKind { harmonic, block, custom };

const char* to_string(MeshKind kind);

// One block I_k = {start, ..., end} of a block mesh. Indices are 1-based.
struct Block {
  std::size_t k = 0;
  std::int64_t width = 0;    // w_k = k + 1
  std::int64_t q = 0;        // Q_k, d_{start} = 1 / Q_k
  std::size_t start = 0;     // i(k)
  std::size_t end = 0;       // i(k + 1) - 1
  std::size_t unit_end = 0;  // j(k): first n in I_k with t_n >= t_{i(k)} + 1

  std::size_t size() const { return end - start + 1; }
  std::size_t unit_size() const { return unit_end - start + 1; }
  bool contains(std::size_t n) const { return n >= start && n <= end; }
};

struct BlockMeta {
  std::vector<Block> blocks;

  std::size_t count() const { return blocks.size(); }
  // k is 1-based.
  const Block& block(std::size_t k) const;
  // Block containing mesh index n, or 0 when n lies past the last block.
  std::size_t block_of(std::size_t n) const;
};

// Step sizes d_1..d_N and knots t_1..t_{N+1}, with t_1 = 0 and
// t_{n+1} = t_n + d_n accumulated with compensated summation.
class Mesh {
 public:
  // Generic mesh from explicit increments; no axioms are enforced here,
  // use validate_mesh for that.
  static Mesh from_increments(std::vector<double> increments);

  std::size_t size() const { return d_.size(); }
  // 1 <= n <= size()
  double d(std::size_t n) const { return d_[n - 1]; }
  // 1 <= n <= size() + 1
  double t(std::size_t n) const { return t_[n - 1]; }

  std::span<const double> increments() const { return d_; }
  std::span<const double> knots() const { return t_; }

  MeshKind kind() const { return kind_; }
  // Harmonic scale delta; 0 for other kinds.
  double delta() const { return delta_; }
  // Q_1 of a block mesh; 0 for other kinds.
  std::int64_t q1() const { return q1_; }
  const BlockMeta* block_meta() const { return meta_ ? &*meta_ : nullptr; }

 private:
  friend Mesh build_harmonic_mesh(double, std::size_t);
  friend struct BlockMeshBuilder;

  Mesh(std::vector<double> d, std::vector<double> t, MeshKind kind)
      : d_(std::move(d)), t_(std::move(t)), kind_(kind) {}

  std::vector<double> d_;
  std::vector<double> t_;
  MeshKind kind_ = MeshKind::custom;
  double delta_ = 0.0;
  std::int64_t q1_ = 0;
  std::optional<BlockMeta> meta_;
};

// d_n = delta / n for n = 1..n_steps. Throws std::invalid_argument unless
// 0 < delta <= 1/8 and n_steps >= 1.
Mesh build_harmonic_mesh(double delta, std::size_t n_steps);

struct BlockMeshOptions {
  // Explicit Q_2, Q_3, ... in order. Each must meet the admissibility bound;
  // blocks past the end of the list use the minimal admissible Q.
  std::vector<std::int64_t> q_override;
};

// Block construction with widths w_k = k + 1. Inside a block
// d_{n+1} = d_n / (1 + 64 d_n^2); a block closes at the first n with
// t_{n+1} >= t_{i(k)} + w_k, and the next block starts with d = 1 / Q_{k+1}.
// The mesh stops at the end of block num_blocks.
Mesh build_block_mesh(std::int64_t q1, std::size_t num_blocks, const BlockMeshOptions& options = {});

// Smallest integer Q with Q >= max{next_start, 2^{next_k + 1} (next_k + 1),
// (1 + 64 d^2) / d}, where d is the last increment of the closing block.
std::int64_t minimal_next_q(std::size_t next_start, std::size_t next_k, double last_increment);

// Relative margins of the three equivalent forms of the step-size axiom at
// index n (comparing n and n + 1). Non-negative means the form holds.
struct StepForms {
  double ratio_form;       // d_{n+1} <= d_n / (1 + 64 d_n^2)
  double reciprocal_form;  // 1/d_{n+1} - 1/d_n >= 64 d_n
  double drift_form;       // 1/d_n - 64 t_n <= 1/d_{n+1} - 64 t_{n+1}
};

std::vector<StepForms> step_forms(const Mesh& mesh);

// 1/d_n - 64 t_n for n = 1..N.
std::vector<double> drift_sequence(const Mesh& mesh);

struct MeshValidationOptions {
  double tol = 1e-12;  // relative slack for the step-size forms and pair checks
  std::size_t pair_budget = 4'000'000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

VerificationReport validate_mesh(const Mesh& mesh, const MeshValidationOptions& options = {});

// The O(N) subset of validate_mesh: positivity, first step and the step-size
// axiom. Throws std::invalid_argument describing the first failure.
void require_mesh_axioms(const Mesh& mesh, double tol = 1e-12);

}  // namespace fne
