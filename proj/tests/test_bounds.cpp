#include <cmath>

#include "betadelta/bounds.hpp"
#include "betadelta/generate.hpp"
#include "betadelta/linalg.hpp"
#include "betadelta/lpn.hpp"
#include "betadelta/rng.hpp"
#include "doctest.h"

using namespace betadelta;

TEST_SUITE_BEGIN("bounds");

TEST_CASE("bound formulas") {
  CHECK(beta_upper(221.98, 24, 1.5) == doctest::Approx(4.562).epsilon(1e-3));
  CHECK(beta_upper(10.0, 24, 0.0) == 0.0);
  CHECK(beta_upper(24.0, 24, 0.7) == doctest::Approx(0.7));
  CHECK_THROWS_AS(beta_upper(1.0, 0, 1.0), std::invalid_argument);

  CHECK(beta_lower(26.02, 100, 1.5) == doctest::Approx(0.7651).epsilon(1e-3));
  CHECK(beta_lower(26.02, 100, 0.0) == 0.0);
  CHECK(beta_lower(100.0, 100, 0.7) == doctest::Approx(0.7));
}

TEST_CASE("exact bounds from simple spectra") {
  // orthonormal columns scaled by s: gram = s^2 I
  const double s = 2.5;
  DenseMatrix Q(4, 2);
  Q(0, 0) = s;
  Q(1, 1) = s;
  const BetaBounds bb = exact_bounds(Q, 1.2);
  CHECK(bb.lambda_max == doctest::Approx(s * s));
  CHECK(bb.lambda_min_nonzero == doctest::Approx(s * s));
  CHECK(bb.lower == doctest::Approx(s * 1.2 / std::sqrt(4.0)));
  CHECK(bb.upper == doctest::Approx(s * 1.2 / std::sqrt(2.0)));
  CHECK(bb.lower <= bb.upper);

  // single unit column
  DenseMatrix one(3, 1);
  one(0, 0) = 1.0;
  const BetaBounds single = exact_bounds(one, 0.9);
  CHECK(single.lower == doctest::Approx(0.9 / std::sqrt(3.0)));
  CHECK(single.upper == doctest::Approx(0.9));

  const DenseMatrix zero(3, 2);
  CHECK_THROWS_AS(exact_bounds(zero, 1.0), std::invalid_argument);
}

TEST_CASE("asymptotic eigenvalue estimates at the reference parameters") {
  const EigenEstimates est = gaussian_eigen_estimates(100, 1.0, 0.24);
  CHECK(est.lambda_min == doctest::Approx(26.02).epsilon(1e-3));
  CHECK(est.lambda_max == doctest::Approx(221.98).epsilon(1e-3));

  const EigenEstimates tiny = gaussian_eigen_estimates(100, 1.0, 1e-12);
  CHECK(tiny.lambda_min == doctest::Approx(100.0).epsilon(1e-5));
  CHECK(tiny.lambda_max == doctest::Approx(100.0).epsilon(1e-5));

  const EigenEstimates square = gaussian_eigen_estimates(100, 1.0, 1.0);
  CHECK(square.lambda_min == 0.0);
  CHECK(square.lambda_max == doctest::Approx(400.0));

  CHECK_THROWS_AS(gaussian_eigen_estimates(100, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_eigen_estimates(100, 1.0, 1.5), std::invalid_argument);
}

TEST_CASE("closed-form interval and composition identity") {
  const BetaBounds bb = gaussian_beta_interval(100, 24, 1.0, 1.5);
  CHECK(bb.lower == doctest::Approx(0.7651).epsilon(1e-3));
  CHECK(bb.upper == doctest::Approx(4.562).epsilon(1e-3));

  // composing the estimates with the bound formulas gives the same numbers
  const EigenEstimates est = gaussian_eigen_estimates(100, 1.0, 0.24);
  CHECK(bb.lower == beta_lower(est.lambda_min, 100, 1.5));
  CHECK(bb.upper == beta_upper(est.lambda_max, 24, 1.5));

  // closed form written out directly
  const double root = std::sqrt(0.24);
  CHECK(bb.lower == doctest::Approx((1.0 - root) * 1.5).epsilon(1e-12));
  CHECK(bb.upper == doctest::Approx((1.0 + root) / root * 1.5).epsilon(1e-12));

  const BetaBounds zero = gaussian_beta_interval(100, 24, 1.0, 0.0);
  CHECK(zero.lower == 0.0);
  CHECK(zero.upper == 0.0);

  const BetaBounds square = gaussian_beta_interval(100, 100, 1.0, 1.5);
  CHECK(square.lower == 0.0);
}

TEST_CASE("monte-carlo spectrum stays near the asymptotic estimates") {
  double mean_max = 0.0, mean_min = 0.0;
  const int draws = 40;
  for (int i = 0; i < draws; ++i) {
    const DenseMatrix A = generate_gaussian_matrix(100, 24, 1.0, 1000 + i);
    const BetaBounds bb = exact_bounds(A, 1.0);
    mean_max += bb.lambda_max;
    mean_min += bb.lambda_min_nonzero;
  }
  mean_max /= draws;
  mean_min /= draws;
  CHECK(mean_max == doctest::Approx(221.98).epsilon(0.25));
  CHECK(mean_min == doctest::Approx(26.02).epsilon(0.25));
}

TEST_CASE("closed-form beta for a known pattern") {
  DenseMatrix I(2, 2);
  I(0, 0) = I(1, 1) = 1.0;
  const SignVector c{{1.0, 1.0}};
  const EqualityResult res = beta_equality(I, {3.0, 4.0}, c, 1.0);
  CHECK(res.beta == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(res.sign_consistent);
  CHECK(res.x_bar[0] == doctest::Approx(3.0 - res.beta));
  CHECK(res.x_bar[1] == doctest::Approx(4.0 - res.beta));

  // orthonormal columns: reduces to sqrt((delta^2 - ||b||^2 + ||A^T b||^2)/k).
  // Here ||b - proj(b)|| = sqrt(0.13), so delta = 0.5 is reachable.
  DenseMatrix Q(4, 2);
  Q(0, 0) = 1.0;
  Q(2, 1) = 1.0;
  const Vec b = {0.9, 0.3, -1.4, 0.2};
  const SignVector cq{{1.0, -1.0}};
  const double delta = 0.5;
  const Vec qtb = matvec_transpose(Q, b);
  const double expected = std::sqrt(
      (delta * delta - dot(b, b) + dot(qtb, qtb)) / 2.0);
  const EqualityResult rq = beta_equality(Q, b, cq, delta);
  CHECK(rq.beta == doctest::Approx(expected).epsilon(1e-12));

  // b inside the column span with delta = 0 collapses the numerator
  const Vec span_b = {0.7, 0.0, -0.2, 0.0};
  const EqualityResult rs = beta_equality(Q, span_b, cq, 0.0);
  CHECK(rs.beta == doctest::Approx(0.0));

  // delta below the out-of-span distance: negative radicand
  CHECK_THROWS_AS(beta_equality(Q, b, cq, 0.25), InfeasibleSupportError);

  DenseMatrix dup(2, 2, {1.0, 1.0, 2.0, 2.0});
  CHECK_THROWS_AS(beta_equality(dup, Vec{1.0, 1.0}, c, 0.1), SingularMatrixError);

  CHECK_THROWS_AS(beta_equality(I, Vec{1.0, 1.0}, SignVector{{1.0, 2.0}}, 0.1),
                  std::invalid_argument);
}

TEST_CASE("equality formula agrees with the root-finder") {
  for (std::uint64_t seed : {7ull, 8ull}) {
    const SensingProblem p = generate_problem(48, 24, 5, 1.0, 0.12, seed);
    const LpnResult res = solve_lpn(p.A, p.b, p.delta);
    REQUIRE(res.converged);
    REQUIRE(res.solution.k >= 1);
    const DenseMatrix a_bar = submatrix_columns(p.A, res.solution.support);
    const SignVector c = sign_pattern(res.solution.x, res.solution.support);
    const EqualityResult eq = beta_equality(a_bar, p.b, c, p.delta);
    CHECK(eq.sign_consistent);
    CHECK(eq.beta == doctest::Approx(res.beta_star).epsilon(0.01));
  }
}

TEST_CASE("matching beta is sandwiched by the spectrum bounds") {
  // the upper bound is rigorous given the boundary identity; the lower bound
  // rests on the flat-residual approximation, so a minority of misses is fine
  int lower_misses = 0;
  for (std::uint64_t seed = 60; seed < 70; ++seed) {
    const SensingProblem p = generate_problem(64, 32, 6, 1.0, 0.12, seed);
    const LpnResult res = solve_lpn(p.A, p.b, p.delta);
    REQUIRE(res.converged);
    const DenseMatrix a_bar = submatrix_columns(p.A, res.solution.support);
    const BetaBounds bb = exact_bounds(a_bar, p.delta);
    CHECK(res.beta_star <= bb.upper * 1.05);
    if (!(bb.lower <= res.beta_star * 1.05)) ++lower_misses;
  }
  CHECK(lower_misses <= 2);
}

TEST_CASE("on-support quadratic identity at a penalized optimum") {
  const SensingProblem p = generate_problem(40, 20, 4, 1.0, 0.1, 26);
  QpConfig cfg;
  cfg.beta = 0.15 * beta_max(p.A, p.b);
  const SparseSolution sol = solve_qp(p.A, p.b, cfg);
  REQUIRE(sol.converged);
  REQUIRE(sol.k >= 1);

  // evaluate r^T (Abar Abar^T) r with the m x m product assembled explicitly
  const DenseMatrix a_bar = submatrix_columns(p.A, sol.support);
  Vec r = matvec(p.A, sol.x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = p.b[i] - r[i];
  double quad = 0.0;
  for (std::size_t i = 0; i < a_bar.rows; ++i) {
    for (std::size_t j = 0; j < a_bar.rows; ++j) {
      quad += r[i] * dot(a_bar.row(i), a_bar.row(j), a_bar.cols) * r[j];
    }
  }
  const double target = cfg.beta * cfg.beta * static_cast<double>(sol.k);
  CHECK(quad == doctest::Approx(target).epsilon(1e-6));
}

TEST_CASE("residual coefficients: trivial cases and energy identity") {
  const DenseMatrix A = generate_gaussian_matrix(10, 3, 1.0, 55);

  const Vec zeros = residual_eigen_coefficients(A, Vec(10, 0.0));
  for (double v : zeros) CHECK(v == 0.0);

  // a residual equal to one eigenvector has a single unit coefficient
  DenseMatrix P(10, 10);
  for (std::size_t i = 0; i < 10; ++i) {
    for (std::size_t j = i; j < 10; ++j) {
      const double s = dot(A.row(i), A.row(j), 3);
      P(i, j) = s;
      P(j, i) = s;
    }
  }
  const EigenDecomposition d = symmetric_eigen(P);
  Vec e1(10);
  for (std::size_t i = 0; i < 10; ++i) e1[i] = d.vectors(i, 0);
  const Vec alpha1 = residual_eigen_coefficients(A, e1);
  CHECK(std::abs(alpha1[0]) == doctest::Approx(1.0).epsilon(1e-10));
  for (std::size_t i = 1; i < 10; ++i) CHECK(std::abs(alpha1[i]) <= 1e-9);

  // energy is preserved for arbitrary residuals
  Rng rng(66);
  Vec r(10);
  for (double& v : r) v = rng.normal();
  const Vec alpha = residual_eigen_coefficients(A, r);
  CHECK(dot(alpha, alpha) == doctest::Approx(dot(r, r)).epsilon(1e-8));
}

TEST_CASE("white residual coefficients are flat on average") {
  const DenseMatrix A = generate_gaussian_matrix(20, 5, 1.0, 91);
  const int trials = 300;
  Vec mean_sq(20, 0.0);
  double mean_ref = 0.0;
  Rng rng(92);
  for (int t = 0; t < trials; ++t) {
    Vec r(20);
    for (double& v : r) v = rng.normal();
    const Vec alpha = residual_eigen_coefficients(A, r);
    for (std::size_t i = 0; i < 20; ++i) mean_sq[i] += alpha[i] * alpha[i];
    mean_ref += dot(r, r) / 20.0;
  }
  mean_ref /= trials;
  for (std::size_t i = 0; i < 20; ++i) {
    CHECK(mean_sq[i] / trials == doctest::Approx(mean_ref).epsilon(0.25));
  }
}

TEST_SUITE_END();
