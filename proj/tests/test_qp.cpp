#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include <shm/qp.hpp>
#include <shm/qp_oracle.hpp>
#include <shm/train.hpp>
#include <shm/verify.hpp>

#include "support/fixtures.hpp"

using shm::Matrix;
using shm::QpProblem;
using shm::QpSolution;
using shm::Vector;

namespace {

QpProblem shm_problem(Matrix h) {
  QpProblem p;
  p.linear.assign(h.rows(), -1.0);
  p.h = std::move(h);
  return p;
}

double sum_d(const QpSolution& sol, const std::vector<int>& d) {
  double s = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) s += d[i] * sol.alpha[i];
  return s;
}

}  // namespace

TEST_CASE("identity hessian, nonnegative mode") {
  const auto sol = shm::solve(shm_problem(Matrix::identity(2)));
  REQUIRE(sol.converged);
  CHECK(sol.alpha[0] == Catch::Approx(1.0).margin(1e-12));
  CHECK(sol.alpha[1] == Catch::Approx(1.0).margin(1e-12));
  CHECK(sol.objective == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("identity hessian with box bound") {
  QpProblem p = shm_problem(Matrix::identity(2));
  p.upper = 0.5;
  const auto sol = shm::solve(p);
  REQUIRE(sol.converged);
  CHECK(sol.alpha[0] == 0.5);
  CHECK(sol.alpha[1] == 0.5);
}

TEST_CASE("identity hessian with equality constraint") {
  QpProblem p = shm_problem(Matrix::identity(2));
  p.d = {1, -1};
  const auto sol = shm::solve(p);
  REQUIRE(sol.converged);
  CHECK(sol.alpha[0] == Catch::Approx(1.0).margin(1e-8));
  CHECK(sol.alpha[1] == Catch::Approx(1.0).margin(1e-8));
  CHECK(std::abs(sum_d(sol, p.d)) <= p.tol);
}

TEST_CASE("singular rank-1 hessian keeps the optimal objective") {
  // any α with α₁+α₂ = 1 is optimal, objective ½
  const auto sol = shm::solve(shm_problem(Matrix{{1, 1}, {1, 1}}));
  REQUIRE(sol.converged);
  CHECK(sol.objective == Catch::Approx(0.5).margin(1e-8));
  CHECK(sol.alpha[0] + sol.alpha[1] == Catch::Approx(1.0).margin(1e-8));
  CHECK(sol.alpha[0] >= 0.0);
  CHECK(sol.alpha[1] >= 0.0);

  const auto oracle = shm::brute_force_oracle(shm_problem(Matrix{{1, 1}, {1, 1}}));
  CHECK(std::abs(oracle.objective - sol.objective) <= 1e-8);
}

TEST_CASE("worked-example hessian reproduces the published multipliers") {
  const shm::TrainingSet& ts = shm::appendix_dataset();
  const auto gp = shm::projector(ts.x);
  const Matrix k = shm::kernel_matrix(ts.y, shm::KernelSpec::linear());
  QpProblem p = shm_problem(shm::hessian(ts.d, k, gp.g));
  const auto sol = shm::solve(p);
  REQUIRE(sol.converged);

  Vector nonzero;
  for (double a : sol.alpha)
    if (shm::truncate_multiplier(a) > 0.0) nonzero.push_back(a);
  REQUIRE(nonzero.size() == 5);
  std::sort(nonzero.begin(), nonzero.end());
  Vector expected = shm::appendix::expected_alpha_values();
  std::sort(expected.begin(), expected.end());
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(std::abs(nonzero[i] - expected[i]) < 0.02);
}

TEST_CASE("validation and error paths") {
  QpProblem p = shm_problem(Matrix::identity(2));
  p.upper = -1.0;
  CHECK_THROWS_AS(shm::solve(p), shm::InfeasibleBox);

  QpProblem asym = shm_problem(Matrix{{1, 2}, {0, 1}});
  CHECK_THROWS_AS(shm::solve(asym), shm::NotSymmetric);

  QpProblem indef = shm_problem(Matrix{{0, 1}, {1, 0}});  // eigenvalues ±1
  CHECK_THROWS_AS(shm::solve(indef), shm::QpFailure);

  QpProblem big = shm_problem(Matrix::identity(11));
  CHECK_THROWS_AS(shm::brute_force_oracle(big), shm::TooLarge);

  QpProblem bad_d = shm_problem(Matrix::identity(2));
  bad_d.d = {1, 2};
  CHECK_THROWS_AS(shm::solve(bad_d), shm::BadLabel);
}

TEST_CASE("iteration cap returns the best iterate flagged") {
  const shm::TrainingSet& ts = shm::appendix_dataset();
  const auto gp = shm::projector(ts.x);
  const Matrix k = shm::kernel_matrix(ts.y, shm::KernelSpec::linear());
  QpProblem p = shm_problem(shm::hessian(ts.d, k, gp.g));
  p.max_iter = 3;
  const auto sol = shm::solve(p);
  CHECK_FALSE(sol.converged);
  CHECK(sol.iterations == 3);
  CHECK(sol.kkt_residual > p.tol);
}

TEST_CASE("objective is non-decreasing across iterations") {
  shmtest::Rng rng(2201);
  for (int rep = 0; rep < 20; ++rep) {
    const std::size_t n = rng.range(2, 6);
    QpProblem p = shm_problem(shmtest::random_pd(rng, n));
    const bool equality = rep % 2 == 0;
    if (equality) p.d = shmtest::random_labels(rng, n, true);

    double last = -std::numeric_limits<double>::infinity();
    bool monotone = true;
    shm::solve(p, [&](const Vector&, double q) {
      if (q < last - 1e-10 * (1.0 + std::abs(last))) monotone = false;
      last = q;
    });
    CHECK(monotone);
  }
}

TEST_CASE("oracle agreement on identity case") {
  const auto a = shm::solve(shm_problem(Matrix::identity(2)));
  const auto b = shm::brute_force_oracle(shm_problem(Matrix::identity(2)));
  CHECK(std::abs(a.objective - b.objective) <= 1e-8);
  CHECK(std::abs(a.alpha[0] - b.alpha[0]) <= 1e-8);
}

TEST_CASE("solver matches oracle on random positive definite problems") {
  shmtest::Rng rng(2202);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = rng.range(2, 4);
    QpProblem p = shm_problem(shmtest::random_pd(rng, n));
    p.tol = 1e-10;
    switch (rep % 4) {
      case 0: break;                                        // script
      case 1: p.upper = rng.uniform(0.3, 2.0); break;       // box
      case 2: p.d = shmtest::random_labels(rng, n, true); break;  // kkt
      default:                                              // kkt + box
        p.d = shmtest::random_labels(rng, n, true);
        p.upper = rng.uniform(0.3, 2.0);
        break;
    }
    const auto sol = shm::solve(p);
    const auto ora = shm::brute_force_oracle(p);
    REQUIRE(sol.converged);
    CHECK(std::abs(sol.objective - ora.objective) <= 1e-8);
    // strictly positive definite: the multipliers are unique
    for (std::size_t i = 0; i < n; ++i)
      CHECK(std::abs(sol.alpha[i] - ora.alpha[i]) <= 1e-6);
  }
}

TEST_CASE("solver matches oracle objective on singular problems") {
  shmtest::Rng rng(2203);
  for (int rep = 0; rep < 60; ++rep) {
    const std::size_t n = rng.range(3, 5);
    QpProblem p;
    p.h = shmtest::random_singular_psd(rng, n);
    // bounded by construction: the linear term lies in the range of H
    Vector w = shmtest::random_vector(rng, n, 0.0, 2.0);
    p.linear = shm::multiply(p.h, w);
    for (double& v : p.linear) v = -v;
    p.tol = 1e-10;
    if (rep % 2 == 0) p.upper = rng.uniform(0.5, 3.0);

    const auto sol = shm::solve(p);
    const auto ora = shm::brute_force_oracle(p);
    REQUIRE(sol.converged);
    CHECK(std::abs(sol.objective - ora.objective) <= 1e-8);
  }
}

TEST_CASE("solution feasibility invariants") {
  shmtest::Rng rng(2204);
  for (int rep = 0; rep < 40; ++rep) {
    const std::size_t n = rng.range(2, 6);
    QpProblem p = shm_problem(shmtest::random_pd(rng, n));
    p.upper = rng.uniform(0.2, 1.5);
    if (rep % 2 == 0) p.d = shmtest::random_labels(rng, n, true);
    const auto sol = shm::solve(p);
    for (double a : sol.alpha) {
      CHECK(a >= 0.0);
      CHECK(a <= p.upper + 1e-12);
    }
    if (!p.d.empty()) CHECK(std::abs(sum_d(sol, p.d)) <= p.tol);
  }
}

TEST_CASE("soft margin with huge C matches the hard margin objective") {
  shmtest::Rng rng(2205);
  for (int rep = 0; rep < 25; ++rep) {
    const auto ts = shmtest::separable_fixture(rng);
    const auto gp = shm::projector(ts.x);
    const Matrix k = shm::kernel_matrix(ts.y, shm::KernelSpec::linear());
    QpProblem p = shm_problem(shm::hessian(ts.d, k, gp.g));
    p.d = ts.d;
    p.tol = 1e-9;
    const auto hard = shm::solve(p);
    p.upper = 1e9;
    const auto soft = shm::solve(p);
    REQUIRE(hard.converged);
    REQUIRE(soft.converged);
    CHECK(std::abs(hard.objective - soft.objective) <= 1e-6);
  }
}
