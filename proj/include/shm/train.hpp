#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include <shm/errors.hpp>
#include <shm/kernel.hpp>
#include <shm/matrix.hpp>
#include <shm/model.hpp>
#include <shm/projector.hpp>
#include <shm/qp.hpp>
#include <shm/training_set.hpp>

namespace shm {

struct TrainConfig {
  double ridge = 0.0;  // 0 auto-escalates only when the covariance needs it
  double c = std::numeric_limits<double>::infinity();  // hard margin
  QpMode qp_mode = QpMode::script;
  bool sv_truncation = true;  // support set via floor(α·10⁴)/10⁴, as the
                              // reference implementation does
  double sv_tol = 0.0;        // support cutoff αᵢ > sv_tol when truncation is off
  double qp_tol = 1e-8;
  std::size_t qp_max_iter = 1'000'000;
  double cond_limit = 1e12;
};

/// floor(α·10⁴)/10⁴ — the reference implementation's support-vector cutoff.
inline double truncate_multiplier(double a) { return std::floor(a * 1e4) / 1e4; }

inline bool is_support(double alpha, const TrainConfig& cfg) {
  if (cfg.sv_truncation) return truncate_multiplier(alpha) > 0.0;
  return alpha > cfg.sv_tol;
}

/// H_ij = dᵢdⱼ·K_ij·G_ij (equivalently deᵀ ∘ K ∘ G ∘ edᵀ).
inline Matrix hessian(const std::vector<int>& d, const Matrix& k, const Matrix& g) {
  const std::size_t n = d.size();
  if (k.rows() != n || k.cols() != n || g.rows() != n || g.cols() != n)
    throw ShapeMismatch("hessian inputs must be N×N with N labels");
  Matrix h(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const double v = (d[i] * d[j]) * (k(i, j) * g(i, j));
      h(i, j) = v;
      h(j, i) = v;
    }
  return h;
}

/// Ŵ = (XXᵀ)⁻¹ Σᵢ αᵢdᵢ xᵢ⊗yᵢᵀ and ŵ₀ = (XXᵀ)⁻¹ Σᵢ αᵢdᵢ xᵢ.
/// Only meaningful for the linear kernel; kernel models keep the support
/// expansion instead.
struct RecoveredWeights {
  Matrix w;   // m×Z
  Vector w0;  // m
};

inline RecoveredWeights recover_weights(const TrainingSet& ts, const GramProjector& gp,
                                        const Vector& alpha) {
  const std::size_t m = ts.input_dim();
  const std::size_t z = ts.output_dim();
  const std::size_t n = ts.size();
  if (alpha.size() != n) throw ShapeMismatch("alpha length mismatch");
  for (double a : alpha)
    if (a < 0.0) throw Error("alpha entries must be nonnegative");

  Matrix outer(m, z);
  Vector sum0(m, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = alpha[i] * ts.d[i];
    if (f == 0.0) continue;
    for (std::size_t p = 0; p < m; ++p) {
      const double fx = f * ts.x(p, i);
      for (std::size_t t = 0; t < z; ++t) outer(p, t) += fx * ts.y(t, i);
      sum0[p] += fx;
    }
  }
  return {multiply(gp.inv_xxt, outer), multiply(gp.inv_xxt, sum0)};
}

/// b̂ = 1 − xᵢᵀŴyᵢ − ŵ₀ᵀxᵢ for the first training-order support vector with
/// dᵢ = +1. sv_tol < 0 selects supports by the floor(α·10⁴)/10⁴ truncation;
/// otherwise by αᵢ > sv_tol.
inline double recover_threshold(const TrainingSet& ts, const Matrix& w,
                                const Vector& w0, const Vector& alpha,
                                double sv_tol = -1.0) {
  const std::size_t n = ts.size();
  if (alpha.size() != n) throw ShapeMismatch("alpha length mismatch");
  for (std::size_t i = 0; i < n; ++i) {
    if (ts.d[i] != 1) continue;
    const bool support =
        sv_tol < 0.0 ? truncate_multiplier(alpha[i]) > 0.0 : alpha[i] > sv_tol;
    if (!support) continue;
    const Vector xi = ts.x.col(i);
    const Vector yi = ts.y.col(i);
    double xwy = 0.0;
    for (std::size_t p = 0; p < w.rows(); ++p) {
      double row = 0.0;
      for (std::size_t t = 0; t < w.cols(); ++t) row += w(p, t) * yi[t];
      xwy += xi[p] * row;
    }
    return 1.0 - xwy - dot(w0, xi);
  }
  throw NoPositiveSupportVector("no support vector with label +1");
}

/// Full training pipeline: covariance, projector, kernel matrix, Hessian,
/// dual QP, weight/threshold recovery.
inline Model train(const TrainingSet& ts, const KernelSpec& spec,
                   const TrainConfig& cfg = {}) {
  ts.validate();
  if (!(cfg.c > 0.0)) throw InfeasibleBox("c must be positive (or infinite)");

  GramProjector gp = projector(ts.x, cfg.ridge, cfg.cond_limit);
  const Matrix k = kernel_matrix(ts.y, spec);

  QpProblem qp;
  qp.h = hessian(ts.d, k, gp.g);
  qp.linear.assign(ts.size(), -1.0);
  if (cfg.qp_mode == QpMode::kkt) qp.d = ts.d;
  qp.upper = cfg.c;
  qp.tol = cfg.qp_tol;
  qp.max_iter = cfg.qp_max_iter;

  const QpSolution sol = solve(qp);
  if (!sol.converged)
    throw QpFailure("dual solver did not converge (residual " +
                    std::to_string(sol.kkt_residual) + " after " +
                    std::to_string(sol.iterations) + " iterations)");

  Model model;
  model.kernel = spec;
  model.input_dim = ts.input_dim();
  model.output_dim = ts.output_dim();
  model.inv_xxt = gp.inv_xxt;
  model.meta = {gp.ridge_used, sol.objective,  cfg.qp_mode,
                cfg.c,         sol.iterations, sol.kkt_residual};

  for (std::size_t i = 0; i < ts.size(); ++i)
    if (is_support(sol.alpha[i], cfg))
      model.supports.push_back({i, ts.x.col(i), ts.y.col(i), ts.d[i], sol.alpha[i]});
  if (model.supports.empty())
    throw DegenerateModel("every multiplier is zero after truncation");

  if (spec.kind == KernelKind::linear) {
    model.mode = ModelMode::linear_explicit;
    RecoveredWeights rw = recover_weights(ts, gp, sol.alpha);
    model.w = std::move(rw.w);
    model.w0 = std::move(rw.w0);
    model.b = recover_threshold(ts, model.w, model.w0, sol.alpha,
                                cfg.sv_truncation ? -1.0 : cfg.sv_tol);
  } else {
    model.mode = ModelMode::kernel_expansion;
    model.b = 0.0;
    bool found = false;
    for (const SupportVector& sv : model.supports) {
      if (sv.d != 1) continue;
      model.b = 1.0 - decide_expansion(model, sv.x, sv.y);
      found = true;
      break;
    }
    if (!found) throw NoPositiveSupportVector("no support vector with label +1");
  }
  return model;
}

}  // namespace shm
