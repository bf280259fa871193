#pragma once

#include <cmath>
#include <cstddef>
#include <string>

#include <shm/errors.hpp>
#include <shm/matrix.hpp>

namespace shm {

enum class KernelKind { linear, polynomial, rbf };

struct KernelSpec {
  KernelKind kind = KernelKind::linear;
  int degree = 2;        // polynomial only, ≥ 1
  double offset = 0.0;   // polynomial only
  double gamma = 1.0;    // rbf only, > 0

  static KernelSpec linear() { return {}; }
  static KernelSpec polynomial(int degree, double offset) {
    if (degree < 1) throw Error("polynomial degree must be positive");
    KernelSpec k;
    k.kind = KernelKind::polynomial;
    k.degree = degree;
    k.offset = offset;
    return k;
  }
  static KernelSpec rbf(double gamma) {
    if (!(gamma > 0.0)) throw Error("rbf gamma must be positive");
    KernelSpec k;
    k.kind = KernelKind::rbf;
    k.gamma = gamma;
    return k;
  }
};

/// K(y, y') for the configured kernel (without the +1 shift).
inline double kernel_eval(const KernelSpec& spec, const Vector& a, const Vector& b) {
  if (a.size() != b.size()) throw ShapeMismatch("kernel operands differ in length");
  switch (spec.kind) {
    case KernelKind::linear:
      return dot(a, b);
    case KernelKind::polynomial: {
      double base = dot(a, b) + spec.offset;
      double r = 1.0;
      for (int k = 0; k < spec.degree; ++k) r *= base;
      return r;
    }
    case KernelKind::rbf: {
      double d2 = 0.0;
      for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        d2 += d * d;
      }
      return std::exp(-spec.gamma * d2);
    }
  }
  throw Error("unknown kernel kind");
}

/// Pairwise matrix K with K_ij = K(y_i, y_j) + 1, columns of y being the
/// examples. The linear kind yields exactly YᵀY + 1.
inline Matrix kernel_matrix(const Matrix& y, const KernelSpec& spec) {
  const std::size_t n = y.cols();
  Matrix k(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const Vector yi = y.col(i);
    for (std::size_t j = i; j < n; ++j) {
      const double v = kernel_eval(spec, yi, y.col(j)) + 1.0;
      k(i, j) = v;
      k(j, i) = v;
    }
  }
  return k;
}

inline std::string to_string(const KernelSpec& spec) {
  switch (spec.kind) {
    case KernelKind::linear:
      return "linear";
    case KernelKind::polynomial:
      return "poly:" + std::to_string(spec.degree) + ":" + std::to_string(spec.offset);
    case KernelKind::rbf:
      return "rbf:" + std::to_string(spec.gamma);
  }
  return "?";
}

}  // namespace shm
