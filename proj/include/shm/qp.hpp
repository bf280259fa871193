#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include <shm/errors.hpp>
#include <shm/linalg.hpp>
#include <shm/matrix.hpp>

namespace shm {

/// min_α ½αᵀHα + linearᵀα  subject to 0 ≤ α (≤ upper),
/// plus Σαᵢdᵢ = 0 when d is present. For SHM linear = −e, so the reported
/// objective is the maximized dual Q(α) = eᵀα − ½αᵀHα.
struct QpProblem {
  Matrix h;
  Vector linear;
  std::vector<int> d;   // empty: no equality constraint
  double upper = std::numeric_limits<double>::infinity();
  double tol = 1e-8;
  std::size_t max_iter = 1'000'000;

  bool equality_active() const { return !d.empty(); }
  bool box_active() const { return std::isfinite(upper); }
};

struct QpSolution {
  Vector alpha;
  double objective = 0.0;       // Q(α) = −(½αᵀHα + linearᵀα)
  double kkt_residual = 0.0;
  std::size_t iterations = 0;   // sweeps (coordinate mode) or pair updates (SMO)
  bool converged = false;
};

/// Observer invoked once per sweep / pair update with (alpha, Q). Test hook.
using QpObserver = std::function<void(const Vector&, double)>;

namespace detail {

inline void validate_problem(const QpProblem& p) {
  const std::size_t n = p.h.rows();
  if (p.h.cols() != n) throw ShapeMismatch("hessian must be square");
  if (p.linear.size() != n) throw ShapeMismatch("linear term length mismatch");
  if (asymmetry(p.h) > 1e-10)
    throw NotSymmetric("hessian is not symmetric within 1e-10");
  if (p.upper < 0.0) throw InfeasibleBox("box upper bound is negative");
  if (p.equality_active()) {
    if (p.d.size() != n) throw ShapeMismatch("label vector length mismatch");
    for (int di : p.d)
      if (di != 1 && di != -1) throw BadLabel("equality labels must be -1 or +1");
  }
  if (n > 0 && min_eigenvalue_bound(p.h) < -1e-6)
    throw QpFailure("hessian is not positive semidefinite within 1e-6");
}

inline Vector gradient(const QpProblem& p, const Vector& alpha) {
  const std::size_t n = alpha.size();
  Vector g = p.linear;
  for (std::size_t j = 0; j < n; ++j) {
    const double aj = alpha[j];
    if (aj == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) g[i] += p.h(i, j) * aj;
  }
  return g;
}

inline double qp_objective(const QpProblem& p, const Vector& alpha) {
  double quad = 0.0;
  double lin = 0.0;
  const std::size_t n = alpha.size();
  for (std::size_t i = 0; i < n; ++i) {
    double hrow = 0.0;
    for (std::size_t j = 0; j < n; ++j) hrow += p.h(i, j) * alpha[j];
    quad += alpha[i] * hrow;
    lin += p.linear[i] * alpha[i];
  }
  return -(0.5 * quad + lin);
}

/// Projected-gradient residual for the bound-constrained modes:
/// max_i |αᵢ − clip(αᵢ − gᵢ, 0, C)|.
inline double bound_residual(const Vector& alpha, const Vector& g, double upper) {
  double r = 0.0;
  for (std::size_t i = 0; i < alpha.size(); ++i) {
    double step = alpha[i] - g[i];
    step = std::min(std::max(step, 0.0), upper);
    r = std::max(r, std::abs(alpha[i] - step));
  }
  return r;
}

/// Maximal-violating-pair gap for the equality-constrained mode. Fills the
/// chosen pair (or npos when a side is empty).
inline double pair_gap(const QpProblem& p, const Vector& alpha, const Vector& g,
                       std::size_t& up, std::size_t& dn) {
  constexpr std::size_t npos = static_cast<std::size_t>(-1);
  const std::size_t n = alpha.size();
  up = npos;
  dn = npos;
  double up_score = std::numeric_limits<double>::infinity();
  double dn_score = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double dg = p.d[i] * g[i];
    const bool can_up = (p.d[i] > 0) ? (alpha[i] < p.upper) : (alpha[i] > 0.0);
    const bool can_dn = (p.d[i] > 0) ? (alpha[i] > 0.0) : (alpha[i] < p.upper);
    if (can_up && dg < up_score) {
      up_score = dg;
      up = i;
    }
    if (can_dn && dg > dn_score) {
      dn_score = dg;
      dn = i;
    }
  }
  if (up == npos || dn == npos) return 0.0;
  return std::max(0.0, dn_score - up_score);
}

/// Cyclic projected coordinate descent, deterministic sweep order 1..N.
inline QpSolution solve_coordinate(const QpProblem& p, const QpObserver& observe) {
  const std::size_t n = p.h.rows();
  QpSolution sol;
  sol.alpha.assign(n, 0.0);
  Vector g = p.linear;

  for (std::size_t sweep = 1; sweep <= p.max_iter; ++sweep) {
    sol.iterations = sweep;
    for (std::size_t i = 0; i < n; ++i) {
      const double hii = p.h(i, i);
      double cand;
      if (hii > 0.0) {
        cand = sol.alpha[i] - g[i] / hii;
        cand = std::min(std::max(cand, 0.0), p.upper);
      } else if (g[i] > 0.0) {
        cand = 0.0;
      } else if (g[i] < 0.0) {
        if (!p.box_active()) {
          // zero curvature, negative slope: the objective is unbounded
          sol.kkt_residual = bound_residual(sol.alpha, g, p.upper);
          sol.objective = qp_objective(p, sol.alpha);
          sol.converged = false;
          return sol;
        }
        cand = p.upper;
      } else {
        cand = sol.alpha[i];
      }
      const double delta = cand - sol.alpha[i];
      if (delta != 0.0) {
        for (std::size_t k = 0; k < n; ++k) g[k] += delta * p.h(k, i);
        sol.alpha[i] = cand;
      }
    }
    if (observe) observe(sol.alpha, qp_objective(p, sol.alpha));

    if (bound_residual(sol.alpha, g, p.upper) <= p.tol) {
      g = gradient(p, sol.alpha);  // drop incremental drift before accepting
      const double res = bound_residual(sol.alpha, g, p.upper);
      if (res <= p.tol) {
        sol.kkt_residual = res;
        sol.objective = qp_objective(p, sol.alpha);
        sol.converged = true;
        return sol;
      }
    }
  }

  g = gradient(p, sol.alpha);
  sol.kkt_residual = bound_residual(sol.alpha, g, p.upper);
  sol.objective = qp_objective(p, sol.alpha);
  sol.converged = false;
  return sol;
}

/// SMO-style pair updates for the equality-constrained mode: pick the
/// maximal KKT-violating pair (lexicographic tie-break), move along the
/// feasibility-preserving direction αᵢ += dᵢt, αⱼ −= dⱼt.
inline QpSolution solve_smo(const QpProblem& p, const QpObserver& observe) {
  const std::size_t n = p.h.rows();
  QpSolution sol;
  sol.alpha.assign(n, 0.0);
  Vector g = p.linear;

  for (std::size_t iter = 1; iter <= p.max_iter; ++iter) {
    sol.iterations = iter;
    std::size_t i, j;
    double gap = pair_gap(p, sol.alpha, g, i, j);
    if (gap <= p.tol) {
      g = gradient(p, sol.alpha);
      gap = pair_gap(p, sol.alpha, g, i, j);
      if (gap <= p.tol) {
        sol.kkt_residual = gap;
        sol.objective = qp_objective(p, sol.alpha);
        sol.converged = true;
        return sol;
      }
    }

    const double cap_i = (p.d[i] > 0) ? p.upper - sol.alpha[i] : sol.alpha[i];
    const double cap_j = (p.d[j] > 0) ? sol.alpha[j] : p.upper - sol.alpha[j];
    const double cap = std::min(cap_i, cap_j);
    const double curv =
        p.h(i, i) + p.h(j, j) - 2.0 * p.d[i] * p.d[j] * p.h(i, j);
    double t;
    if (curv > 1e-12) {
      t = std::min(gap / curv, cap);
    } else if (std::isinf(cap)) {
      sol.kkt_residual = gap;
      sol.objective = qp_objective(p, sol.alpha);
      sol.converged = false;  // flat unbounded direction
      return sol;
    } else {
      t = cap;
    }

    if (t == cap_i)
      sol.alpha[i] = (p.d[i] > 0) ? p.upper : 0.0;
    else
      sol.alpha[i] += p.d[i] * t;
    if (t == cap_j)
      sol.alpha[j] = (p.d[j] > 0) ? 0.0 : p.upper;
    else
      sol.alpha[j] -= p.d[j] * t;
    for (std::size_t k = 0; k < n; ++k)
      g[k] += t * (p.d[i] * p.h(k, i) - p.d[j] * p.h(k, j));

    if (observe) observe(sol.alpha, qp_objective(p, sol.alpha));
  }

  std::size_t i, j;
  g = gradient(p, sol.alpha);
  sol.kkt_residual = pair_gap(p, sol.alpha, g, i, j);
  sol.objective = qp_objective(p, sol.alpha);
  sol.converged = false;
  return sol;
}

}  // namespace detail

inline QpSolution solve(const QpProblem& p, const QpObserver& observe = {}) {
  detail::validate_problem(p);
  if (p.equality_active()) return detail::solve_smo(p, observe);
  return detail::solve_coordinate(p, observe);
}

}  // namespace shm
