#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaussian_paths.hpp"
#include "rng.hpp"

using namespace fclt;

TEST_CASE("zero covariance gives the zero path") {
  const CovMatrix zero(2);
  RngStream rng(1, 0);
  const PathGrid z = sample_correlated_bm(zero, 64, rng);
  CHECK(z.sup_norm() == 0.0);
}

TEST_CASE("terminal variance of standard BM is one") {
  const CovMatrix id = CovMatrix::identity(1);
  RngStream rng(7, 0);
  double sum2 = 0.0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const PathGrid z = sample_correlated_bm(id, 32, rng);
    const double v = z.at(32, 0);
    sum2 += v * v;
  }
  CHECK(std::abs(sum2 / draws - 1.0) < 0.02);
}

TEST_CASE("terminal correlation follows the covariance") {
  CovMatrix sigma(2);
  sigma.at(0, 0) = 1.0;
  sigma.at(1, 1) = 1.0;
  sigma.at(0, 1) = 0.5;
  sigma.at(1, 0) = 0.5;
  RngStream rng(11, 0);
  double s00 = 0.0, s11 = 0.0, s01 = 0.0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const PathGrid z = sample_correlated_bm(sigma, 16, rng);
    const double a = z.at(16, 0);
    const double b = z.at(16, 1);
    s00 += a * a;
    s11 += b * b;
    s01 += a * b;
  }
  const double corr = s01 / std::sqrt(s00 * s11);
  CHECK(std::abs(corr - 0.5) < 0.015);
}

TEST_CASE("brownian increments carry covariance (t-s) Sigma") {
  CovMatrix sigma(2);
  sigma.at(0, 0) = 2.0;
  sigma.at(1, 1) = 1.0;
  sigma.at(0, 1) = -0.3;
  sigma.at(1, 0) = -0.3;
  RngStream rng(13, 0);
  const std::size_t grid = 32;
  const std::size_t qa = 8, qb = 24;  // t - s = 1/2
  double s00 = 0.0, s01 = 0.0, s11 = 0.0;
  const int draws = 50000;
  for (int s = 0; s < draws; ++s) {
    const PathGrid z = sample_correlated_bm(sigma, grid, rng);
    const double a = z.at(qb, 0) - z.at(qa, 0);
    const double b = z.at(qb, 1) - z.at(qa, 1);
    s00 += a * a;
    s01 += a * b;
    s11 += b * b;
  }
  const double nd = draws;
  CHECK(std::abs(s00 / nd - 1.0) < 0.03);
  CHECK(std::abs(s11 / nd - 0.5) < 0.02);
  CHECK(std::abs(s01 / nd - (-0.15)) < 0.02);
}

TEST_CASE("prelimit process basics") {
  DependencyModel dep;
  dep.n = 1;
  dep.p = 1;
  dep.lambdas = {1};
  dep.neighborhoods = independent_neighborhoods(1);

  SUBCASE("zero covariance gives the zero path") {
    const CovMatrix zero(1);
    RngStream rng(3, 1);
    const PathGrid d = sample_prelimit_gaussian(zero, dep, 16, rng);
    CHECK(d.sup_norm() == 0.0);
  }

  SUBCASE("n=1: flat until the terminal jump, unit variance there") {
    const CovMatrix one = CovMatrix::identity(1);
    RngStream rng(5, 2);
    double sum2 = 0.0;
    const int draws = 100000;
    for (int s = 0; s < draws; ++s) {
      const PathGrid d = sample_prelimit_gaussian(one, dep, 16, rng);
      REQUIRE(d.at(8, 0) == 0.0);  // jump only at t = 1
      sum2 += d.at(16, 0) * d.at(16, 0);
    }
    CHECK(std::abs(sum2 / draws - 1.0) < 0.02);
  }
}

TEST_CASE("prelimit process with two independent jumps sums the variances") {
  DependencyModel dep;
  dep.n = 2;
  dep.p = 1;
  dep.lambdas = {2};
  dep.neighborhoods = independent_neighborhoods(2);
  const CovMatrix id = CovMatrix::identity(2);
  RngStream rng(9, 3);
  double sum2 = 0.0;
  const int draws = 100000;
  for (int s = 0; s < draws; ++s) {
    const PathGrid d = sample_prelimit_gaussian(id, dep, 16, rng);
    sum2 += d.at(16, 0) * d.at(16, 0);
  }
  CHECK(std::abs(sum2 / draws - 2.0) < 0.05);
}

TEST_CASE("dense cap is enforced") {
  DependencyModel dep;
  dep.n = 4097;
  dep.p = 1;
  dep.lambdas = {4097};
  dep.neighborhoods = independent_neighborhoods(4097);
  const CovMatrix big(4097);
  RngStream rng(1, 1);
  CHECK_THROWS_AS(static_cast<void>(sample_prelimit_gaussian(big, dep, 8, rng)),
                  std::invalid_argument);
}

TEST_CASE("coupled pair freezes the z path on the lambda grid") {
  const CovMatrix sigma = CovMatrix::identity(1);
  RngStream rng(17, 0);
  const CoupledPair pair = sample_coupled_pair(sigma, {4}, 16, rng);
  for (std::size_t q = 0; q <= 16; ++q) {
    const std::size_t frozen = (q / 4) * 4;
    CHECK(pair.a_tilde.at(q, 0) == pair.z.at(frozen, 0));
  }
}

TEST_CASE("zero covariance gives a zero coupling distance") {
  const CovMatrix zero(2);
  RngStream rng(19, 0);
  const CoupledPair pair = sample_coupled_pair(zero, {4, 8}, 32, rng);
  CHECK(coupling_sup_distance(pair) == 0.0);
}

TEST_CASE("lambda equal to the grid leaves only the increments") {
  const CovMatrix id = CovMatrix::identity(1);
  RngStream rng(23, 0);
  const CoupledPair pair = sample_coupled_pair(id, {16}, 16, rng);
  double max_inc = 0.0;
  for (std::size_t q = 0; q < 16; ++q)
    max_inc = std::max(max_inc, std::abs(pair.z.at(q + 1, 0) - pair.z.at(q, 0)));
  CHECK(coupling_sup_distance(pair) == doctest::Approx(max_inc));
}

TEST_CASE("incompatible grid is rejected") {
  const CovMatrix id = CovMatrix::identity(1);
  RngStream rng(29, 0);
  CHECK_THROWS_WITH_AS(static_cast<void>(sample_coupled_pair(id, {5}, 16, rng)),
                       "grid incompatible with lambdas", std::invalid_argument);
}

TEST_CASE("modulus bound closed form") {
  SUBCASE("zero covariance") { CHECK(modulus_bound({2}, CovMatrix(1)) == 0.0); }
  SUBCASE("p=1, lambda=2, sigma=1") {
    const double v = modulus_bound({2}, CovMatrix::identity(1));
    const double expected =
        6.0 * std::sqrt(5.0) / std::sqrt(2.0 * std::numbers::ln2) * std::sqrt(std::log(4.0) / 2.0);
    CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    CHECK(v == doctest::Approx(9.487).epsilon(1e-3));
  }
  SUBCASE("doubling sigma scales by sqrt 2") {
    CovMatrix two = CovMatrix::identity(3);
    for (std::size_t i = 0; i < 3; ++i) two.at(i, i) = 2.0;
    const double base = modulus_bound({4, 8, 16}, CovMatrix::identity(3));
    const double scaled = modulus_bound({4, 8, 16}, two);
    CHECK(scaled == doctest::Approx(base * std::sqrt(2.0)).epsilon(1e-12));
  }
}

TEST_CASE("empirical coupling distance obeys the modulus bound") {
  const CovMatrix id = CovMatrix::identity(1);
  const double bound = modulus_bound({64}, id);
  RngStream rng(31, 0);
  double acc = 0.0;
  const int draws = 20000;
  for (int s = 0; s < draws; ++s) {
    const CoupledPair pair = sample_coupled_pair(id, {64}, 1024, rng);
    acc += coupling_sup_distance(pair);
  }
  const double mean = acc / draws;
  CHECK(mean <= bound);
  CHECK(mean > 0.05);  // the bound is loose but the distance is not trivial
}

TEST_CASE("doob l2 bound for partial-sum maxima") {
  RngStream rng(37, 0);
  for (const int n : {16, 256}) {
    double acc = 0.0;
    const int draws = 20000;
    for (int s = 0; s < draws; ++s) {
      double sum = 0.0, best = 0.0;
      for (int i = 0; i < n; ++i) {
        sum += rng.next_gaussian();
        best = std::max(best, std::abs(sum));
      }
      acc += best * best;
    }
    CHECK(acc / draws <= 4.0 * n);
  }
}

TEST_CASE("common grid size uses the lcm for small p") {
  CHECK(common_grid_size({4, 6}, 16) == 16 * 12);
  CHECK(common_grid_size({8}, 16) == 128);
}
