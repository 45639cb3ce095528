#include "spectral/littlewood_paley.hpp"

#include <bit>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>

#include "common/error.hpp"
#include "spectral/ops.hpp"

namespace bpl {
namespace {

double bump_tail(double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; }

}  // namespace

double smooth_step(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double a = bump_tail(x);
  const double b = bump_tail(1.0 - x);
  return a / (a + b);
}

double lp_chi(double r) { return 1.0 - smooth_step((r - 0.5) / 0.5); }

double lp_phi(double r) { return lp_chi(0.5 * r) - lp_chi(r); }

int lp_max_block(const Grid2D& g) { return std::bit_width(static_cast<unsigned>(g.n())) - 1 - 2; }

DyadicPartition::DyadicPartition(const Grid2D& g) : grid_(g), q_max_(lp_max_block(g)) {
  tables_.assign(static_cast<std::size_t>(block_count()), std::vector<double>(g.spectral_size(), 0.0));
  for (int i1 = 0; i1 < g.n(); ++i1) {
    const int k1 = g.wavenumber(i1);
    for (int k2 = 0; k2 < g.half(); ++k2) {
      const double r = std::hypot(static_cast<double>(k1), static_cast<double>(k2));
      const std::size_t idx = g.spectral_at(i1, k2);
      tables_[0][idx] = lp_chi(r);
      for (int q = 0; q < q_max_; ++q) tables_[static_cast<std::size_t>(q + 1)][idx] = lp_phi(std::ldexp(r, -q));
      tables_[static_cast<std::size_t>(q_max_ + 1)][idx] = 1.0 - lp_chi(std::ldexp(r, -q_max_));
    }
  }
}

const std::vector<double>& DyadicPartition::weights(int q) const {
  if (q < -1) fail(ErrorCode::InvalidArgument, "dyadic block index must be >= -1");
  if (q > q_max_)
    fail(ErrorCode::OutOfBand,
         "dyadic block " + std::to_string(q) + " exceeds q_max = " + std::to_string(q_max_));
  return tables_[static_cast<std::size_t>(q + 1)];
}

Spectrum DyadicPartition::project(const Spectrum& s, int q) const {
  require_same_grid(grid_, s.grid(), "lp_project");
  const std::vector<double>& w = weights(q);
  Spectrum out = s;
  for (std::size_t i = 0; i < w.size(); ++i) out[i] *= w[i];
  return out;
}

double DyadicPartition::partition_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < grid_.spectral_size(); ++i) {
    double sum = 0.0;
    for (const auto& t : tables_) sum += t[i];
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

const DyadicPartition& dyadic_partition(const Grid2D& g) {
  static std::mutex m;
  static std::map<int, std::unique_ptr<DyadicPartition>> cache;
  std::lock_guard lock(m);
  auto it = cache.find(g.n());
  if (it == cache.end()) it = cache.emplace(g.n(), std::make_unique<DyadicPartition>(g)).first;
  return *it->second;
}

ScalarField lp_project(const ScalarField& f, int q) {
  return fft::inverse(dyadic_partition(f.grid()).project(fft::forward(f), q));
}

ScalarField DyadicDecomposition::reconstruct() const {
  if (blocks.empty()) fail(ErrorCode::InvalidArgument, "empty dyadic decomposition");
  ScalarField sum(blocks.front().field.grid());
  for (const auto& b : blocks) sum += b.field;
  return sum;
}

DyadicDecomposition lp_decompose(const ScalarField& f) {
  const DyadicPartition& part = dyadic_partition(f.grid());
  const Spectrum s = fft::forward(f);
  DyadicDecomposition d;
  for (int q = -1; q <= part.max_block(); ++q) d.blocks.push_back({q, fft::inverse(part.project(s, q))});
  return d;
}

BonyParts bony_decompose(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u.grid(), v.grid(), "bony_decompose");
  const Grid2D& g = u.grid();
  const DyadicDecomposition du = lp_decompose(u);
  const DyadicDecomposition dv = lp_decompose(v);
  const int count = static_cast<int>(du.blocks.size());
  const auto& bu = du.blocks;
  const auto& bv = dv.blocks;

  // Low-frequency sums S_{q−1} = Σ_{q' ≤ q−2} Δ_{q'}, indexed by block position.
  auto low_sums = [&](const std::vector<DyadicBlock>& blocks) {
    std::vector<ScalarField> s(static_cast<std::size_t>(count), ScalarField(g));
    for (int i = 2; i < count; ++i) s[static_cast<std::size_t>(i)] = s[static_cast<std::size_t>(i - 1)] + blocks[static_cast<std::size_t>(i - 2)].field;
    return s;
  };
  const std::vector<ScalarField> su = low_sums(bu);
  const std::vector<ScalarField> sv = low_sums(bv);

  ScalarField tuv(g), tvu(g), rem(g);
  for (int i = 0; i < count; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    tuv += multiply(su[ui], bv[ui].field);
    tvu += multiply(sv[ui], bu[ui].field);
    ScalarField near = bv[ui].field;
    if (i > 0) near += bv[ui - 1].field;
    if (i + 1 < count) near += bv[ui + 1].field;
    rem += multiply(bu[ui].field, near);
  }
  return {dealias(tuv), dealias(tvu), dealias(rem)};
}

}  // namespace bpl
