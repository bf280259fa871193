#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include <shm/matrix.hpp>
#include <shm/model.hpp>
#include <shm/train.hpp>
#include <shm/training_set.hpp>

namespace shm {

/// Built-in 16-point worked example (the appendix dataset): two input
/// features, two tabular output functions, alternating labels. Training on
/// it in script mode must reproduce the published intermediate and final
/// values, which verify_appendix checks item by item.
inline const TrainingSet& appendix_dataset() {
  static const TrainingSet ts = [] {
    const Matrix x{{-7.94, -8.05, -6.12, -6.10, -4.85, -4.13, -2.81, -2.97, -2.09,
                    -1.11, 1.05, -0.10, 2.84, 1.10, 4.15, 3.11},
                   {-2.94, 2.09, -4.17, 3.18, -2.04, 5.13, -2.14, 6.13, -1.00, 4.80,
                    -0.94, 4.18, 0.11, 3.04, 1.07, 3.11}};
    const Matrix y{{-10.17, 9.93, -12.18, 11.02, -13.18, 8.20, -9.04, 6.88, -0.89,
                    0.83, -2.11, 1.87, -3.03, 2.88, -3.93, 4.11},
                   {-0.92, 0.97, -2.13, 2.08, -2.96, 2.86, -4.05, 3.80, -10.88, 7.87,
                    -12.07, 9.10, -12.99, 10.04, -14.04, 10.88}};
    std::vector<int> d(16);
    for (std::size_t i = 0; i < 16; ++i) d[i] = (i % 2 == 0) ? -1 : 1;
    return TrainingSet(x, y, d);
  }();
  return ts;
}

namespace appendix {

inline const Vector& expected_inv_diag() {
  static const Vector v{0.0033, 0.0057};
  return v;
}
inline constexpr double expected_g11 = 0.2555;
inline constexpr double expected_k11 = 105.2753;
inline constexpr double expected_h11 = 26.8997;
inline constexpr double expected_h12 = 17.7437;

inline const Matrix& expected_w() {
  static const Matrix w{{0.0053, 0.0743}, {0.0583, -0.1083}};
  return w;
}
inline const Vector& expected_w0() {
  static const Vector v{0.1832, 1.1905};
  return v;
}
inline constexpr double expected_b = 0.0;

/// Decision values over the 16 training points, training order.
inline const Vector& expected_r() {
  static const Vector v{-2.5363, 1.0000, -2.7258, 2.6956, -1.0000, 5.1564,
                        -1.8939, 5.7426, -1.0000, 1.0000,  -2.9927, 1.2272,
                        -2.0000, 1.8642, -1.0000, 3.9359};
  return v;
}

/// Support-vector block rows [xᵢᵀŴ | ŵ₀ᵀxᵢ + b − dᵢ], training order.
inline const Matrix& expected_s() {
  static const Matrix s{{0.0792, -0.8244, 0.0132},
                        {-0.1445, -0.1395, -2.3174},
                        {-0.0693, -0.0470, -0.5735},
                        {0.2738, -0.6021, 4.5112},
                        {0.0843, 0.1925, 3.0343}};
  return s;
}

/// Published nonzero multipliers. The matching support positions (0-based)
/// are the points whose decision value sits exactly on the margin.
inline const std::vector<std::size_t>& expected_alpha_positions() {
  static const std::vector<std::size_t> p{1, 4, 8, 9, 14};
  return p;
}
inline const Vector& expected_alpha_values() {
  static const Vector v{2.2771, 9.8557, 162.5579, 20.1065, 69.5705};
  return v;
}

}  // namespace appendix

struct VerifyCheck {
  std::string name;
  double delta = 0.0;  // worst absolute deviation observed
  double tol = 0.0;
  bool pass = false;
};

struct VerifyReport {
  std::vector<VerifyCheck> checks;
  double train_seconds = 0.0;
  bool pass = false;
};

/// Trains on the built-in dataset (script mode, linear kernel, hard margin)
/// and compares every published block against the fresh run.
inline VerifyReport verify_appendix() {
  VerifyReport rep;
  auto check = [&rep](const std::string& name, double delta, double tol) {
    rep.checks.push_back({name, delta, tol, delta <= tol});
  };

  const TrainingSet& ts = appendix_dataset();
  const TrainConfig cfg;  // script mode, hard margin, truncation on

  const auto t0 = std::chrono::steady_clock::now();
  const Model model = train(ts, KernelSpec::linear(), cfg);
  rep.train_seconds = std::chrono::duration<double>(
                          std::chrono::steady_clock::now() - t0).count();

  // Intermediate matrices, recomputed the same way train does.
  const GramProjector gp = projector(ts.x, cfg.ridge, cfg.cond_limit);
  const Matrix k = kernel_matrix(ts.y, KernelSpec::linear());
  const Matrix h = hessian(ts.d, k, gp.g);

  {
    double delta = 0.0;
    for (std::size_t i = 0; i < 2; ++i)
      delta = std::max(delta,
                       std::abs(gp.inv_xxt(i, i) - appendix::expected_inv_diag()[i]));
    check("(XXt)^-1 diagonal", delta, 1e-4);
  }
  check("G(1,1)", std::abs(gp.g(0, 0) - appendix::expected_g11), 1e-3);
  check("K(1,1)", std::abs(k(0, 0) - appendix::expected_k11), 1e-3);
  check("H(1,1)", std::abs(h(0, 0) - appendix::expected_h11), 1e-3);
  check("H(1,2)", std::abs(h(0, 1) - appendix::expected_h12), 1e-3);
  check("W", max_abs_diff(model.w, appendix::expected_w()), 1e-3);
  {
    double delta = 0.0;
    for (std::size_t i = 0; i < model.w0.size(); ++i)
      delta = std::max(delta, std::abs(model.w0[i] - appendix::expected_w0()[i]));
    check("w0", delta, 1e-3);
  }
  check("b", std::abs(model.b - appendix::expected_b), 1e-3);

  {
    double delta = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
      const double hi = decide(model, ts.x.col(i), ts.y.col(i));
      delta = std::max(delta, std::abs(hi - appendix::expected_r()[i]));
    }
    check("R vector (16 decision values)", delta, 1e-3);
  }

  {
    const Matrix& s = appendix::expected_s();
    double delta = s.max_abs();  // worst case when the row count is off
    if (model.supports.size() == s.rows()) {
      delta = 0.0;
      const auto lines = supporting_hyperplanes(model);
      for (std::size_t r = 0; r < s.rows(); ++r) {
        for (std::size_t t = 0; t < lines[r].normal.size(); ++t)
          delta = std::max(delta, std::abs(lines[r].normal[t] - s(r, t)));
        delta = std::max(delta, std::abs(lines[r].offset - s(r, 2)));
      }
    }
    check("S block (5 support-vector rows)", delta, 1e-3);
  }

  {
    // Multiplier multiset, ±0.02 each; falls back to the dual objective
    // when the solver lands on a different optimum of the degenerate dual.
    Vector ours;
    for (const SupportVector& sv : model.supports) ours.push_back(sv.alpha);
    Vector expected = appendix::expected_alpha_values();
    std::sort(ours.begin(), ours.end());
    std::sort(expected.begin(), expected.end());
    if (ours.size() == expected.size()) {
      double delta = 0.0;
      for (std::size_t i = 0; i < ours.size(); ++i)
        delta = std::max(delta, std::abs(ours[i] - expected[i]));
      check("alpha multiset (5 nonzero multipliers)", delta, 0.02);
    } else {
      Vector ref(ts.size(), 0.0);
      for (std::size_t i = 0; i < expected.size(); ++i)
        ref[appendix::expected_alpha_positions()[i]] =
            appendix::expected_alpha_values()[i];
      const GramProjector gp2 = projector(ts.x);
      double q_ref = 0.0;
      {
        const Matrix k2 = kernel_matrix(ts.y, KernelSpec::linear());
        const Matrix h2 = hessian(ts.d, k2, gp2.g);
        double quad = 0.0, lin = 0.0;
        for (std::size_t i = 0; i < ref.size(); ++i) {
          for (std::size_t j = 0; j < ref.size(); ++j)
            quad += ref[i] * h2(i, j) * ref[j];
          lin += ref[i];
        }
        q_ref = lin - 0.5 * quad;
      }
      check("alpha fallback: dual objective vs published multipliers",
            std::max(0.0, q_ref - model.meta.qp_objective), 1e-6);
    }
  }

  {
    // Sign agreement: the classifier reproduces every training label.
    double wrong = 0.0;
    for (std::size_t i = 0; i < ts.size(); ++i)
      if (classify(model, ts.x.col(i), ts.y.col(i)) != ts.d[i]) wrong += 1.0;
    check("classification agrees with all 16 labels", wrong, 0.0);
  }

  rep.pass = true;
  for (const VerifyCheck& c : rep.checks) rep.pass = rep.pass && c.pass;
  return rep;
}

}  // namespace shm
