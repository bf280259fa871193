#pragma once

#include <cstddef>
#include <utility>

#include <shm/errors.hpp>
#include <shm/linalg.hpp>
#include <shm/matrix.hpp>

namespace shm {

/// Orthogonal projector G = Xᵀ(XXᵀ)⁻¹X together with the cached regularized
/// inverse of the covariance. G is symmetric to the last bit by construction;
/// with ridge_used = 0 it is idempotent to ~1e-8.
struct GramProjector {
  Matrix inv_xxt;     // (XXᵀ + λI)⁻¹, m×m
  Matrix g;           // Xᵀ·inv_xxt·X, N×N
  double ridge_used = 0.0;
};

inline GramProjector projector(const Matrix& x, double ridge = 0.0,
                               double cond_limit = 1e12) {
  Matrix xxt = multiply(x, x.transpose());
  RegularizedInverse inv;
  try {
    inv = regularized_inverse(xxt, ridge, cond_limit);
  } catch (const SingularAfterRegularization& e) {
    throw SingularCovariance(e.what());
  }
  GramProjector gp;
  gp.g = sandwich_sym(x, inv.inverse);
  gp.inv_xxt = std::move(inv.inverse);
  gp.ridge_used = inv.lambda;
  return gp;
}

}  // namespace shm
