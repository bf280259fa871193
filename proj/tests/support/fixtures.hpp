#pragma once

// Deterministic random fixtures for the property suites. The raw engine is
// std::mt19937_64 but all value mapping is done by hand so the streams are
// identical on every platform and standard library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <shm/linalg.hpp>
#include <shm/matrix.hpp>
#include <shm/training_set.hpp>

namespace shmtest {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  std::size_t index(std::size_t n) {  // 0..n-1
    return static_cast<std::size_t>(eng_() % n);
  }

  std::size_t range(std::size_t lo, std::size_t hi) {  // inclusive
    return lo + index(hi - lo + 1);
  }

  int sign() { return (eng_() & 1) ? 1 : -1; }

 private:
  std::mt19937_64 eng_;
};

inline shm::Matrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols,
                                 double lo = -1.0, double hi = 1.0) {
  shm::Matrix m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) m(i, j) = rng.uniform(lo, hi);
  return m;
}

inline shm::Vector random_vector(Rng& rng, std::size_t n, double lo, double hi) {
  shm::Vector v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

/// m×N input block whose covariance XXᵀ keeps a condition estimate ≤ 1e6,
/// so the projector needs no ridge. Requires m ≤ N (a wide block can never
/// have a full-rank covariance).
inline shm::Matrix random_inputs(Rng& rng, std::size_t m, std::size_t n) {
  if (m > n) throw shm::Error("random_inputs needs m <= n");
  for (;;) {
    shm::Matrix x = random_matrix(rng, m, n, -2.0, 2.0);
    const shm::SymEigen e = shm::sym_eigen(shm::multiply(x, x.transpose()));
    const double lo = std::abs(e.values.front());
    const double hi = std::abs(e.values.back());
    if (lo > 0.0 && hi / lo < 1e6) return x;
  }
}

/// Draws m in 1..3 and N in max(2,m)..8, then a cond-limited input block.
inline shm::Matrix random_projector_inputs(Rng& rng, std::size_t* n_out = nullptr) {
  const std::size_t m = rng.range(1, 3);
  const std::size_t n = rng.range(std::max<std::size_t>(2, m), 8);
  if (n_out) *n_out = n;
  return random_inputs(rng, m, n);
}

inline std::vector<int> random_labels(Rng& rng, std::size_t n, bool both_signs) {
  for (;;) {
    std::vector<int> d(n);
    bool pos = false, neg = false;
    for (int& v : d) {
      v = rng.sign();
      (v > 0 ? pos : neg) = true;
    }
    if (!both_signs || (pos && neg)) return d;
  }
}

/// Strictly positive definite Hessian BᵀB + 0.05I with B n×n.
inline shm::Matrix random_pd(Rng& rng, std::size_t n) {
  const shm::Matrix b = random_matrix(rng, n, n);
  shm::Matrix h = shm::sandwich_sym(b, shm::Matrix::identity(n));
  for (std::size_t i = 0; i < n; ++i) h(i, i) += 0.05;
  return h;
}

/// Singular PSD Hessian BᵀB with B r×n, r < n.
inline shm::Matrix random_singular_psd(Rng& rng, std::size_t n) {
  const std::size_t r = rng.range(1, n - 1);
  const shm::Matrix b = random_matrix(rng, r, n);
  return shm::sandwich_sym(b, shm::Matrix::identity(r));
}

/// Training set that is separable by construction: labels come from a
/// random (W*, w₀*, b*) scaled so the smallest decision magnitude is
/// exactly 1, which makes the hard-margin constraints feasible.
inline shm::TrainingSet separable_fixture(Rng& rng, std::size_t m, std::size_t z,
                                          std::size_t n);

/// Separable fixture with m ≤ 3, Z ≤ 3, N in 4..8 drawn in a fixed order.
inline shm::TrainingSet separable_fixture(Rng& rng) {
  const std::size_t m = rng.range(1, 3);
  const std::size_t z = rng.range(1, 3);
  const std::size_t n = rng.range(4, 8);
  return separable_fixture(rng, m, z, n);
}

inline shm::TrainingSet separable_fixture(Rng& rng, std::size_t m, std::size_t z,
                                          std::size_t n) {
  for (;;) {
    shm::Matrix x = random_inputs(rng, m, n);
    shm::Matrix y = random_matrix(rng, z, n, -3.0, 3.0);
    const shm::Matrix w = random_matrix(rng, m, z);
    const shm::Vector w0 = random_vector(rng, m, -1.0, 1.0);
    const double b = rng.uniform(-0.5, 0.5);

    shm::Vector h(n);
    double min_mag = 1e300;
    for (std::size_t i = 0; i < n; ++i) {
      double v = b;
      for (std::size_t p = 0; p < m; ++p) {
        double row = 0.0;
        for (std::size_t t = 0; t < z; ++t) row += w(p, t) * y(t, i);
        v += x(p, i) * (row + w0[p]);
      }
      h[i] = v;
      min_mag = std::min(min_mag, std::abs(v));
    }
    if (min_mag < 0.1) continue;  // too close to the surface, resample

    std::vector<int> d(n);
    bool pos = false, neg = false;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = h[i] >= 0.0 ? 1 : -1;
      (d[i] > 0 ? pos : neg) = true;
    }
    if (!pos || !neg) continue;
    return shm::TrainingSet(std::move(x), std::move(y), std::move(d));
  }
}

}  // namespace shmtest
