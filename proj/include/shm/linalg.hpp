#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include <shm/errors.hpp>
#include <shm/matrix.hpp>

namespace shm {

inline constexpr double kSymmetryTol = 1e-10;

/// A = V·diag(values)·Vᵀ with eigenvalues ascending and eigenvectors in the
/// columns of V. Cyclic Jacobi; for n ≤ 64 the eigenvalues are accurate to
/// well below 1e-9 absolute at unit scale.
struct SymEigen {
  Vector values;
  Matrix vectors;
};

inline SymEigen sym_eigen(const Matrix& a) {
  if (a.rows() != a.cols()) throw ShapeMismatch("sym_eigen needs a square matrix");
  if (asymmetry(a) > kSymmetryTol)
    throw NotSymmetric("matrix is not symmetric within 1e-10");

  const std::size_t n = a.rows();
  Matrix m = a;
  // Force exact symmetry so the rotations see one consistent value.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) m(j, i) = m(i, j);
  Matrix v = Matrix::identity(n);

  const double scale = m.max_abs();
  const double stop = static_cast<double>(n) * std::numeric_limits<double>::epsilon() * scale;
  const std::size_t max_sweeps = 64;

  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off = std::max(off, std::abs(m(p, q)));
    if (off <= stop) break;
    if (sweep + 1 == max_sweeps)
      throw ConvergenceFailure("jacobi eigensolver did not converge");

    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        const double apq = m(p, q);
        if (std::abs(apq) <= stop * 1e-3) continue;
        const double tau = (m(q, q) - m(p, p)) / (2.0 * apq);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        const double app = m(p, p);
        const double aqq = m(q, q);
        m(p, p) = app - t * apq;
        m(q, q) = aqq + t * apq;
        m(p, q) = 0.0;
        m(q, p) = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
          if (k == p || k == q) continue;
          const double akp = m(k, p);
          const double akq = m(k, q);
          m(k, p) = c * akp - s * akq;
          m(p, k) = m(k, p);
          m(k, q) = s * akp + c * akq;
          m(q, k) = m(k, q);
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return m(i, i) < m(j, j); });

  SymEigen e;
  e.values.resize(n);
  e.vectors = Matrix(n, n);
  for (std::size_t k = 0; k < n; ++k) {
    e.values[k] = m(order[k], order[k]);
    for (std::size_t i = 0; i < n; ++i) e.vectors(i, k) = v(i, order[k]);
  }
  return e;
}

/// Lower estimate of the smallest eigenvalue of a symmetric matrix.
inline double min_eigenvalue_bound(const Matrix& a) {
  return sym_eigen(a).values.front();
}

struct RegularizedInverse {
  Matrix inverse;   // (a + lambda·I)⁻¹
  double lambda;    // the ridge actually applied
};

namespace detail {

inline double shifted_condition(const Vector& eigenvalues, double lambda) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (double ev : eigenvalues) {
    const double m = std::abs(ev + lambda);
    lo = std::min(lo, m);
    hi = std::max(hi, m);
  }
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

}  // namespace detail

/// (a + λI)⁻¹ for symmetric a. λ = ridge when ridge > 0. With ridge 0 the
/// matrix is inverted directly while its condition estimate stays below
/// cond_limit; otherwise λ walks the ladder 10⁻¹²·trace(a)/n · 10ᵏ until the
/// estimate recovers.
inline RegularizedInverse regularized_inverse(const Matrix& a, double ridge,
                                              double cond_limit = 1e12) {
  if (a.rows() != a.cols())
    throw ShapeMismatch("regularized_inverse needs a square matrix");
  if (ridge < 0.0) throw Error("ridge must be nonnegative");
  SymEigen e = sym_eigen(a);  // NotSymmetric propagates

  const std::size_t n = a.rows();
  double lambda = 0.0;
  if (ridge > 0.0) {
    lambda = ridge;
  } else if (detail::shifted_condition(e.values, 0.0) > cond_limit) {
    const double base = 1e-12 * std::abs(a.trace()) / static_cast<double>(n);
    if (base == 0.0)
      throw SingularAfterRegularization("matrix has zero trace, no ridge ladder");
    bool restored = false;
    double step = base;
    for (int k = 0; k <= 60; ++k, step *= 10.0) {
      if (detail::shifted_condition(e.values, step) <= cond_limit) {
        lambda = step;
        restored = true;
        break;
      }
    }
    if (!restored)
      throw SingularAfterRegularization("ridge ladder exhausted at cond_limit " +
                                        std::to_string(cond_limit));
  }

  Matrix inv(n, n);
  const Matrix& v = e.vectors;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < n; ++k)
        s += v(i, k) * (v(j, k) / (e.values[k] + lambda));
      inv(i, j) = s;
      inv(j, i) = s;
    }
  return {std::move(inv), lambda};
}

/// Rank-truncated SVD, A ≈ U·diag(s)·Vᵀ with s descending and the columns of
/// U orthonormal. Column signs are normalized: the largest-magnitude entry of
/// each U column is positive (ties broken by lowest row index).
/// For inputs whose numerical rank is clean at rank_tol the reconstruction
/// error ‖U·diag(s)·Vᵀ − A‖∞ stays below rank·1e-13·‖A‖∞.
struct CondensedSvd {
  Matrix u;
  Vector s;
  Matrix v;
  std::size_t rank = 0;
};

inline CondensedSvd condensed_svd(const Matrix& a, double rank_tol = 1e-10) {
  const bool transposed = a.rows() < a.cols();
  Matrix b = transposed ? a.transpose() : a;
  const std::size_t p = b.rows();
  const std::size_t q = b.cols();
  Matrix v = Matrix::identity(q);

  // One-sided Jacobi: orthogonalize the columns of b.
  const double eps = 1e-15;
  const std::size_t max_sweeps = 64;
  bool converged = false;
  for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
    converged = true;
    for (std::size_t i = 0; i + 1 < q; ++i)
      for (std::size_t j = i + 1; j < q; ++j) {
        double aii = 0.0, ajj = 0.0, aij = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          aii += b(k, i) * b(k, i);
          ajj += b(k, j) * b(k, j);
          aij += b(k, i) * b(k, j);
        }
        if (aij == 0.0 || std::abs(aij) <= eps * std::sqrt(aii * ajj)) continue;
        converged = false;
        const double tau = (ajj - aii) / (2.0 * aij);
        const double t = (tau >= 0.0) ? 1.0 / (tau + std::sqrt(1.0 + tau * tau))
                                      : 1.0 / (tau - std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        for (std::size_t k = 0; k < p; ++k) {
          const double bi = b(k, i);
          const double bj = b(k, j);
          b(k, i) = c * bi - s * bj;
          b(k, j) = s * bi + c * bj;
        }
        for (std::size_t k = 0; k < q; ++k) {
          const double vi = v(k, i);
          const double vj = v(k, j);
          v(k, i) = c * vi - s * vj;
          v(k, j) = s * vi + c * vj;
        }
      }
  }
  if (!converged) throw ConvergenceFailure("one-sided jacobi svd did not converge");

  Vector sigma(q);
  for (std::size_t j = 0; j < q; ++j) {
    double s2 = 0.0;
    for (std::size_t k = 0; k < p; ++k) s2 += b(k, j) * b(k, j);
    sigma[j] = std::sqrt(s2);
  }

  std::vector<std::size_t> order(q);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t i, std::size_t j) { return sigma[i] > sigma[j]; });

  const double smax = q ? sigma[order[0]] : 0.0;
  std::size_t r = 0;
  while (r < q && sigma[order[r]] > rank_tol * smax) ++r;
  if (smax == 0.0) r = 0;

  CondensedSvd out;
  out.rank = r;
  out.s.resize(r);
  out.u = Matrix(p, r);
  out.v = Matrix(q, r);
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t j = order[k];
    out.s[k] = sigma[j];
    for (std::size_t i = 0; i < p; ++i) out.u(i, k) = b(i, j) / sigma[j];
    for (std::size_t i = 0; i < q; ++i) out.v(i, k) = v(i, j);
  }

  if (transposed) std::swap(out.u, out.v);

  // Sign convention: largest-magnitude entry of each U column positive,
  // ties broken by lowest row index.
  for (std::size_t k = 0; k < r; ++k) {
    std::size_t arg = 0;
    double best = 0.0;
    for (std::size_t i = 0; i < out.u.rows(); ++i)
      if (std::abs(out.u(i, k)) > best) {
        best = std::abs(out.u(i, k));
        arg = i;
      }
    if (out.u(arg, k) < 0.0) {
      for (std::size_t i = 0; i < out.u.rows(); ++i) out.u(i, k) = -out.u(i, k);
      for (std::size_t i = 0; i < out.v.rows(); ++i) out.v(i, k) = -out.v(i, k);
    }
  }
  return out;
}

}  // namespace shm
