#pragma once

#include <vector>

#include "spectral/field.hpp"

namespace bpl {

// Radial profiles of the dyadic partition. χ ≡ 1 on |ξ| ≤ 1/2 and vanishes for
// |ξ| ≥ 1; φ(ξ) = χ(ξ/2) − χ(ξ) lives in the annulus 1/2 ≤ |ξ| ≤ 2.
double smooth_step(double x);
double lp_chi(double r);
double lp_phi(double r);

// Highest block index on an n-grid: log₂(n) − 2.
int lp_max_block(const Grid2D& g);

/// Tabulated multipliers of Δ_q, q = −1 .. q_max, on the half-spectrum lattice.
/// The top block is the high-pass remainder 1 − χ(2^{−q_max}ξ), so the blocks
/// sum to one on every lattice point.
class DyadicPartition {
 public:
  explicit DyadicPartition(const Grid2D& g);

  const Grid2D& grid() const noexcept { return grid_; }
  int max_block() const noexcept { return q_max_; }
  int block_count() const noexcept { return q_max_ + 2; }
  // Multiplier table for block q (q = −1 .. q_max).
  const std::vector<double>& weights(int q) const;

  // Δ_q applied to a spectrum; throws OutOfBand for q > q_max.
  Spectrum project(const Spectrum& s, int q) const;

  // Largest deviation of Σ_q weights from 1 over the lattice.
  double partition_defect() const;

 private:
  Grid2D grid_;
  int q_max_;
  std::vector<std::vector<double>> tables_;
};

// Shared partition instance for a grid (built once per n, then read-only).
const DyadicPartition& dyadic_partition(const Grid2D& g);

/// Δ_q f.
ScalarField lp_project(const ScalarField& f, int q);

struct DyadicBlock {
  int q;
  ScalarField field;
};

struct DyadicDecomposition {
  std::vector<DyadicBlock> blocks;  // ordered q = −1 .. q_max

  ScalarField reconstruct() const;
};

DyadicDecomposition lp_decompose(const ScalarField& f);

struct BonyParts {
  ScalarField paraproduct_uv;  // T_u v
  ScalarField paraproduct_vu;  // T_v u
  ScalarField remainder;       // R(u, v)
};

/// Bony split of the dealiased product u·v; the three parts sum to dealias(u·v).
BonyParts bony_decompose(const ScalarField& u, const ScalarField& v);

}  // namespace bpl
