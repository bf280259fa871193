#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <shm/errors.hpp>
#include <shm/matrix.hpp>
#include <shm/qp.hpp>

namespace shm {

namespace detail {

/// Gaussian elimination with partial pivoting; nullopt when singular.
inline std::optional<Vector> solve_linear(Matrix a, Vector b) {
  const std::size_t n = a.rows();
  double scale = a.max_abs();
  if (scale == 0.0) scale = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (std::abs(a(piv, col)) <= 1e-12 * scale) return std::nullopt;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(piv, c), a(col, c));
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      b[r] -= f * b[col];
    }
  }
  Vector x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a(i, c) * x[c];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace detail

/// Exhaustive active-set enumeration for small problems: every variable is
/// tried at zero, at the box bound, or free; the reduced stationarity system
/// is solved per active set and the feasible KKT point with the best
/// objective wins. Intended as a test oracle, N ≤ 10.
inline QpSolution brute_force_oracle(const QpProblem& p) {
  detail::validate_problem(p);
  const std::size_t n = p.h.rows();
  if (n > 10) throw TooLarge("brute-force oracle is limited to N <= 10");

  const int nstates = p.box_active() ? 3 : 2;  // 0: at zero, 1: free, 2: at upper
  double scale = std::max(p.h.max_abs(), 1.0);
  for (double c : p.linear) scale = std::max(scale, std::abs(c));
  const double feas_tol = 1e-9 * scale;
  const double sign_tol = 1e-6 * scale;

  QpSolution best;
  best.objective = -std::numeric_limits<double>::infinity();
  bool found = false;
  std::size_t examined = 0;

  std::vector<int> state(n, 0);
  std::size_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= static_cast<std::size_t>(nstates);

  for (std::size_t code = 0; code < combos; ++code) {
    ++examined;
    std::size_t rem = code;
    for (std::size_t i = 0; i < n; ++i) {
      state[i] = static_cast<int>(rem % nstates);
      rem /= nstates;
    }

    std::vector<std::size_t> free_idx;
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 1) free_idx.push_back(i);

    Vector alpha(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      if (state[i] == 2) alpha[i] = p.upper;

    const std::size_t nf = free_idx.size();
    double beta = 0.0;  // multiplier of the equality constraint

    if (p.equality_active() && nf > 0) {
      // Bordered system: stationarity on the free set + Σαᵢdᵢ = 0.
      Matrix sys(nf + 1, nf + 1);
      Vector rhs(nf + 1, 0.0);
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t i = free_idx[a];
        for (std::size_t b = 0; b < nf; ++b) sys(a, b) = p.h(i, free_idx[b]);
        sys(a, nf) = p.d[i];
        sys(nf, a) = p.d[i];
        double r = -p.linear[i];
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] == 2) r -= p.h(i, j) * p.upper;
        rhs[a] = r;
      }
      double fixed = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (state[j] == 2) fixed += p.d[j] * p.upper;
      rhs[nf] = -fixed;
      auto x = detail::solve_linear(sys, rhs);
      if (!x) continue;
      for (std::size_t a = 0; a < nf; ++a) alpha[free_idx[a]] = (*x)[a];
      beta = (*x)[nf];
    } else if (p.equality_active()) {
      // No free variables: the equality constraint must already hold.
      double fixed = 0.0;
      for (std::size_t j = 0; j < n; ++j)
        if (state[j] == 2) fixed += p.d[j] * p.upper;
      if (std::abs(fixed) > feas_tol) continue;
    } else if (nf > 0) {
      Matrix sys(nf, nf);
      Vector rhs(nf, 0.0);
      for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t i = free_idx[a];
        for (std::size_t b = 0; b < nf; ++b) sys(a, b) = p.h(i, free_idx[b]);
        double r = -p.linear[i];
        for (std::size_t j = 0; j < n; ++j)
          if (state[j] == 2) r -= p.h(i, j) * p.upper;
        rhs[a] = r;
      }
      auto x = detail::solve_linear(sys, rhs);
      if (!x) continue;
      for (std::size_t a = 0; a < nf; ++a) alpha[free_idx[a]] = (*x)[a];
    }

    // Primal feasibility of the free block, with tiny violations clamped.
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (alpha[i] < -feas_tol || alpha[i] > p.upper + feas_tol) ok = false;
      alpha[i] = std::min(std::max(alpha[i], 0.0), p.upper);
    }
    if (!ok) continue;

    Vector g = detail::gradient(p, alpha);

    if (p.equality_active() && nf == 0) {
      // β is free: find any value satisfying the sign conditions.
      double lo = -std::numeric_limits<double>::infinity();
      double hi = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < n; ++i) {
        // at zero: gᵢ + βdᵢ ≥ 0; at upper: gᵢ + βdᵢ ≤ 0
        if (state[i] == 0) {
          if (p.d[i] > 0)
            lo = std::max(lo, -g[i]);
          else
            hi = std::min(hi, g[i]);
        } else {
          if (p.d[i] > 0)
            hi = std::min(hi, -g[i]);
          else
            lo = std::max(lo, g[i]);
        }
      }
      if (lo > hi + sign_tol) continue;
      beta = std::min(std::max(0.0, lo), hi);
    }

    for (std::size_t i = 0; i < n && ok; ++i) {
      const double s = g[i] + (p.equality_active() ? beta * p.d[i] : 0.0);
      if (state[i] == 0 && s < -sign_tol) ok = false;
      if (state[i] == 1 && std::abs(s) > sign_tol) ok = false;
      if (state[i] == 2 && s > sign_tol) ok = false;
    }
    if (!ok) continue;

    const double q = detail::qp_objective(p, alpha);
    if (!found || q > best.objective) {
      found = true;
      best.alpha = alpha;
      best.objective = q;
      if (p.equality_active()) {
        std::size_t up, dn;
        best.kkt_residual = detail::pair_gap(p, alpha, g, up, dn);
      } else {
        best.kkt_residual = detail::bound_residual(alpha, g, p.upper);
      }
    }
  }

  if (!found)
    throw QpFailure("active-set enumeration found no KKT point (unbounded?)");
  best.iterations = examined;
  best.converged = true;
  return best;
}

}  // namespace shm
