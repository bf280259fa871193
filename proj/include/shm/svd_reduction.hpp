#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include <shm/errors.hpp>
#include <shm/linalg.hpp>
#include <shm/matrix.hpp>
#include <shm/projector.hpp>

namespace shm {

/// Variable substitution cᵢ = dᵢ·Σ_q u_iq over the condensed SVD of the
/// projector. Implemented exactly as formulated; for rank(G) > 1 the
/// substitution drops the SVD cross terms, which is what consistency_report
/// measures instead of silently correcting.
struct ReducedProblem {
  Vector c;              // length N
  std::size_t rank = 0;  // rank(G)
  Matrix k;              // kernel+1 matrix
  double upper = std::numeric_limits<double>::infinity();
};

inline ReducedProblem reduce(const GramProjector& gp, const std::vector<int>& d,
                             const Matrix& k, double rank_tol = 1e-10) {
  if (gp.ridge_used != 0.0)
    throw RidgedProjector("the reduction requires an exact (ridge-free) projector");
  const std::size_t n = gp.g.rows();
  if (d.size() != n || k.rows() != n || k.cols() != n)
    throw ShapeMismatch("labels / kernel matrix do not match the projector");

  const CondensedSvd svd = condensed_svd(gp.g, rank_tol);
  ReducedProblem rp;
  rp.rank = svd.rank;
  rp.k = k;
  rp.c.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t q = 0; q < svd.rank; ++q) row += svd.u(i, q);
    rp.c[i] = d[i] * row;
  }
  return rp;
}

/// Q_reduced(α) = −½ΣᵢΣⱼ αᵢαⱼcᵢcⱼK_ij + Σᵢαᵢ.
inline double reduced_objective(const ReducedProblem& rp, const Vector& alpha) {
  const std::size_t n = rp.c.size();
  if (alpha.size() != n) throw ShapeMismatch("alpha length mismatch");
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      quad += alpha[i] * alpha[j] * rp.c[i] * rp.c[j] * rp.k(i, j);
    lin += alpha[i];
  }
  return -0.5 * quad + lin;
}

/// Q_full(α) = −½ΣᵢΣⱼ αᵢαⱼdᵢdⱼK_ij·g_ij + Σᵢαᵢ — the unreduced dual.
inline double full_objective(const GramProjector& gp, const std::vector<int>& d,
                             const Matrix& k, const Vector& alpha) {
  const std::size_t n = alpha.size();
  if (d.size() != n || gp.g.rows() != n || k.rows() != n)
    throw ShapeMismatch("objective inputs disagree on N");
  double quad = 0.0;
  double lin = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      quad += alpha[i] * alpha[j] * (d[i] * d[j]) * (k(i, j) * gp.g(i, j));
    lin += alpha[i];
  }
  return -0.5 * quad + lin;
}

struct ConsistencyReport {
  std::size_t samples = 0;
  std::size_t rank = 0;
  double max_gap = 0.0;
  double mean_gap = 0.0;
  bool pass = false;  // max_gap ≤ 1e-10
  std::uint64_t seed = 0;
};

/// Compares the reduced objective against the full dual on seeded random
/// nonnegative α vectors. The sampler is fixed (not distribution-library
/// dependent) so reports reproduce across platforms.
inline ConsistencyReport consistency_report(const ReducedProblem& rp,
                                            const GramProjector& gp,
                                            const std::vector<int>& d, const Matrix& k,
                                            std::size_t alpha_samples,
                                            std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform01 = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };

  ConsistencyReport rep;
  rep.samples = alpha_samples;
  rep.rank = rp.rank;
  rep.seed = seed;
  const std::size_t n = rp.c.size();
  double total = 0.0;
  for (std::size_t s = 0; s < alpha_samples; ++s) {
    Vector alpha(n);
    for (std::size_t i = 0; i < n; ++i) alpha[i] = uniform01();
    const double gap =
        std::abs(reduced_objective(rp, alpha) - full_objective(gp, d, k, alpha));
    rep.max_gap = std::max(rep.max_gap, gap);
    total += gap;
  }
  rep.mean_gap = alpha_samples ? total / static_cast<double>(alpha_samples) : 0.0;
  rep.pass = rep.max_gap <= 1e-10;
  return rep;
}

}  // namespace shm
