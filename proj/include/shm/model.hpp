#pragma once

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <shm/errors.hpp>
#include <shm/kernel.hpp>
#include <shm/matrix.hpp>
#include <shm/training_set.hpp>

namespace shm {

enum class ModelMode { linear_explicit, kernel_expansion };
enum class QpMode { script, kkt };

struct SupportVector {
  std::size_t index = 0;  // position in the training set
  Vector x;
  Vector y;
  int d = 1;
  double alpha = 0.0;
};

struct TrainMeta {
  double ridge_used = 0.0;
  double qp_objective = 0.0;
  QpMode qp_mode = QpMode::script;
  double c = 0.0;
  std::size_t qp_iterations = 0;
  double qp_residual = 0.0;
};

/// Trained SHM. linear_explicit predicts through the recovered weights
/// (Ŵ, ŵ₀); kernel_expansion predicts through the stored support vectors.
/// Supports are retained in both modes.
struct Model {
  ModelMode mode = ModelMode::linear_explicit;
  KernelSpec kernel;
  std::size_t input_dim = 0;   // m
  std::size_t output_dim = 0;  // Z
  Matrix w;                    // m×Z (linear_explicit only)
  Vector w0;                   // m   (linear_explicit only)
  double b = 0.0;
  Matrix inv_xxt;              // m×m
  std::vector<SupportVector> supports;
  TrainMeta meta;
};

/// Per-support-vector line coefficients: normal·y + offset = 0.
struct HyperplaneCoeffs {
  Vector normal;      // xᵢᵀŴ, length Z
  double offset = 0;  // ŵ₀ᵀxᵢ + b̂ − dᵢ
  std::size_t support_index = 0;
};

namespace detail {

inline void check_dims(const Model& model, const Vector& x, const Vector& y) {
  if (x.size() != model.input_dim || y.size() != model.output_dim)
    throw DimensionMismatch("expected x of length " + std::to_string(model.input_dim) +
                            " and y of length " + std::to_string(model.output_dim));
}

}  // namespace detail

/// Support-expansion form of the decision value:
/// h = Σᵢ α̂ᵢdᵢ(K(yᵢ,y)+1)·xᵢᵀ(XXᵀ)⁻¹x + b̂. Works in both modes.
inline double decide_expansion(const Model& model, const Vector& x, const Vector& y) {
  detail::check_dims(model, x, y);
  const Vector px = multiply(model.inv_xxt, x);
  double h = 0.0;
  for (const SupportVector& sv : model.supports)
    h += sv.alpha * sv.d * (kernel_eval(model.kernel, sv.y, y) + 1.0) * dot(sv.x, px);
  return h + model.b;
}

/// Decision value h(x, y); its sign is the class.
inline double decide(const Model& model, const Vector& x, const Vector& y) {
  if (model.mode == ModelMode::kernel_expansion) return decide_expansion(model, x, y);
  detail::check_dims(model, x, y);
  double h = model.b;
  for (std::size_t i = 0; i < model.input_dim; ++i) {
    double row = 0.0;
    for (std::size_t t = 0; t < model.output_dim; ++t) row += model.w(i, t) * y[t];
    h += x[i] * row;
    h += model.w0[i] * x[i];
  }
  return h;
}

/// Sign of the decision value; h = 0 maps to +1.
inline int classify(const Model& model, const Vector& x, const Vector& y) {
  return decide(model, x, y) >= 0.0 ? 1 : -1;
}

/// One line per support vector, training order: normal = xᵢᵀŴ,
/// offset = ŵ₀ᵀxᵢ + b̂ − dᵢ. Kernel models have no explicit Ŵ to expand.
inline std::vector<HyperplaneCoeffs> supporting_hyperplanes(const Model& model) {
  if (model.mode != ModelMode::linear_explicit)
    throw KernelModeUnsupported("hyperplane coefficients need the explicit weights");
  std::vector<HyperplaneCoeffs> lines;
  lines.reserve(model.supports.size());
  for (const SupportVector& sv : model.supports) {
    HyperplaneCoeffs hc;
    hc.support_index = sv.index;
    hc.normal.resize(model.output_dim);
    for (std::size_t t = 0; t < model.output_dim; ++t) {
      double s = 0.0;
      for (std::size_t i = 0; i < model.input_dim; ++i) s += sv.x[i] * model.w(i, t);
      hc.normal[t] = s;
    }
    hc.offset = dot(model.w0, sv.x) + model.b - sv.d;
    lines.push_back(std::move(hc));
  }
  return lines;
}

/// Algebraic distance rᵢ = dᵢ / ‖[ŵ₀ᵀxᵢ, xᵢᵀŴ]‖ per training example.
inline Vector margins(const Model& model, const TrainingSet& ts) {
  if (model.mode != ModelMode::linear_explicit)
    throw KernelModeUnsupported("margins need the explicit weights");
  if (ts.input_dim() != model.input_dim || ts.output_dim() != model.output_dim)
    throw DimensionMismatch("training set does not match the model dimensions");
  Vector r(ts.size());
  for (std::size_t i = 0; i < ts.size(); ++i) {
    const Vector xi = ts.x.col(i);
    double sq = dot(model.w0, xi);
    sq *= sq;
    for (std::size_t t = 0; t < model.output_dim; ++t) {
      double s = 0.0;
      for (std::size_t p = 0; p < model.input_dim; ++p) s += xi[p] * model.w(p, t);
      sq += s * s;
    }
    const double norm = std::sqrt(sq);
    if (norm == 0.0)
      throw ZeroNormVector("example " + std::to_string(i + 1) +
                           " has a zero margin-normal vector");
    r[i] = ts.d[i] / norm;
  }
  return r;
}

inline std::string to_string(ModelMode m) {
  return m == ModelMode::linear_explicit ? "linear-explicit" : "kernel-expansion";
}

inline std::string to_string(QpMode m) { return m == QpMode::script ? "script" : "kkt"; }

}  // namespace shm
