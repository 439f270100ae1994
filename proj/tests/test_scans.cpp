#include <doctest.h>

#include <cmath>
#include <vector>

#include "rng.hpp"
#include "scans_model.hpp"

using namespace fclt;

namespace {

ScansModel bernoulli_model(int p, int m, std::uint64_t n, double a) {
  ScansModel model;
  model.p = p;
  model.m = m;
  model.n = n;
  model.thresholds.assign(static_cast<std::size_t>(p), a);
  if (p == 1) {
    model.atoms = {{0.0}, {1.0}};
    model.probs = {0.5, 0.5};
  } else {
    // correlated Bernoulli(1/2) pair, correlation 0.6
    model.atoms = {{0.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}, {1.0, 0.0}};
    model.probs = {0.4, 0.4, 0.1, 0.1};
  }
  return model;
}

}  // namespace

TEST_CASE("pi by enumeration") {
  SUBCASE("m=1 at the median") {
    const auto pi = scans_pi(bernoulli_model(1, 1, 4, 0.0));
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
  }
  SUBCASE("m=2 at zero") {
    const auto pi = scans_pi(bernoulli_model(1, 2, 4, 0.0));
    CHECK(pi[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("threshold above the reachable range") {
    const auto pi = scans_pi(bernoulli_model(1, 2, 4, 2.0));
    CHECK(pi[0] == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("psi by enumeration") {
  SUBCASE("m=1 at the median") {
    const auto psi = scans_psi(bernoulli_model(1, 1, 4, 0.0), 0);
    CHECK(psi[0] == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("disjoint windows vanish") {
    const auto psi = scans_psi(bernoulli_model(1, 1, 4, 0.0), 1);
    CHECK(psi[0] == 0.0);
  }
  SUBCASE("m=2, d=1 at zero") {
    // P(V2+V3 <= 0, V1+V2 <= 0) - (1/4)^2 = 1/8 - 1/16 = 1/16
    const auto psi = scans_psi(bernoulli_model(1, 2, 4, 0.0), 1);
    CHECK(psi[0] == doctest::Approx(1.0 / 16.0).epsilon(1e-12));
  }
  SUBCASE("psi(0) is symmetric in the coordinates") {
    const ScansModel model = bernoulli_model(2, 2, 4, 1.0);
    const auto psi = scans_psi(model, 0);
    CHECK(psi[1] == doctest::Approx(psi[2]).epsilon(1e-12));
  }
}

TEST_CASE("psi agrees with monte carlo sampling") {
  const ScansModel model = bernoulli_model(2, 2, 8, 1.0);
  for (int d : {0, 1}) {
    const auto exact = scans_psi(model, d);
    const auto mc = scans_psi_mc(model, d, 200000, 31);
    for (std::size_t e = 0; e < exact.size(); ++e)
      CHECK(std::abs(mc[e].mean - exact[e]) <= 3.0 * mc[e].se + 1e-12);
  }
}

TEST_CASE("pi agrees with monte carlo sampling") {
  const ScansModel model = bernoulli_model(1, 2, 8, 0.0);
  const auto exact = scans_pi(model);
  const auto mc = scans_pi_mc(model, 200000, 33);
  CHECK(std::abs(mc[0].mean - exact[0]) <= 3.0 * mc[0].se);
}

TEST_CASE("state explosion beyond the cap is reported") {
  ScansModel model = bernoulli_model(1, 2, 4, 0.0);
  model.atoms.clear();
  model.probs.clear();
  for (int i = 0; i < 1025; ++i) {  // 1025^2 > 1e6
    model.atoms.push_back({static_cast<double>(i)});
    model.probs.push_back(1.0 / 1025.0);
  }
  CHECK_THROWS_WITH_AS(static_cast<void>(scans_pi(model)), doctest::Contains("state explosion"),
                       std::invalid_argument);
}

TEST_CASE("sigma assembles psi exactly") {
  SUBCASE("m=1: sigma equals psi(0)") {
    const ScansModel model = bernoulli_model(1, 1, 4, 0.0);
    const CovMatrix sigma = scans_sigma(model, scans_stats(model));
    CHECK(sigma.at(0, 0) == doctest::Approx(0.25).epsilon(1e-12));
  }
  SUBCASE("symmetry for p=2") {
    const ScansModel model = bernoulli_model(2, 2, 8, 1.0);
    const CovMatrix sigma = scans_sigma(model, scans_stats(model));
    CHECK(sigma.at(0, 1) == doctest::Approx(sigma.at(1, 0)).epsilon(1e-12));
    CHECK(sigma.at(0, 0) > 0.0);
  }
}

TEST_CASE("impossible threshold makes the path identically zero") {
  ScansModel model = bernoulli_model(1, 2, 6, -1.0);  // below the support
  const ScansStats stats = scans_stats(model);
  CHECK(stats.pi[0] == 0.0);
  RngStream rng(3, 0);
  for (ScansRegime regime : {ScansRegime::block_average, ScansRegime::unit}) {
    const PathGrid path = scans_sample_path(model, regime, stats, rng, 4);
    CHECK(path.sup_norm() == 0.0);
  }
}

TEST_CASE("path terminal value is centered and matches the analytic variance") {
  const ScansModel model = bernoulli_model(2, 2, 12, 1.0);
  const ScansStats stats = scans_stats(model);
  for (ScansRegime regime : {ScansRegime::block_average, ScansRegime::unit}) {
    const ScansOracle oracle(model, regime);
    // Var(Y(1)_k) from the analytic second moments.
    double target = 0.0;
    const std::size_t rows = oracle.rows();
    const long range = oracle.dependence_range();
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t lo = i >= static_cast<std::size_t>(range) ? i - range : 0;
      const std::size_t hi = std::min(rows, i + static_cast<std::size_t>(range) + 1);
      for (std::size_t j = lo; j < hi; ++j) target += oracle.second_moment(i, 0, j, 0);
    }

    RngStream rng(5, 1);
    double sum = 0.0, sum2 = 0.0, sum4 = 0.0;
    const int draws = 40000;
    for (int s = 0; s < draws; ++s) {
      const PathGrid path = scans_sample_path(model, regime, stats, rng, 2);
      const double v = path.at(path.grid_n(), 0);
      sum += v;
      sum2 += v * v;
      sum4 += v * v * v * v;
    }
    const double nd = draws;
    const double mean = sum / nd;
    const double mean2 = sum2 / nd;
    const double se_mean = std::sqrt(std::max(0.0, mean2 - mean * mean) / nd);
    const double se_var = std::sqrt(std::max(0.0, sum4 / nd - mean2 * mean2) / nd);
    CHECK(std::abs(mean) <= 3.0 * se_mean);
    CHECK(std::abs(mean2 - target) <= 3.0 * se_var);
  }
}

TEST_CASE("analytic second moments match sampled arrays") {
  const ScansModel model = bernoulli_model(2, 2, 10, 1.0);
  for (ScansRegime regime : {ScansRegime::block_average, ScansRegime::unit}) {
    const ScansOracle oracle(model, regime);
    const std::size_t rows = oracle.rows();
    const std::size_t cells = rows * 2;
    std::vector<double> acc(cells * 3, 0.0);  // lag 0 same-coord, lag 0 cross, lag 1 same
    RngStream rng(7, 2);
    std::vector<double> x(cells);
    const int draws = 120000;
    for (int s = 0; s < draws; ++s) {
      oracle.sample_array(rng, x);
      acc[0] += x[0] * x[0];                 // E[X_{1,1}^2]
      acc[1] += x[0] * x[1];                 // E[X_{1,1} X_{1,2}]
      acc[2] += x[0] * x[2];                 // E[X_{1,1} X_{2,1}]
    }
    const double nd = draws;
    const double tol = 10.0 / std::sqrt(nd) * std::abs(oracle.second_moment(0, 0, 0, 0));
    CHECK(std::abs(acc[0] / nd - oracle.second_moment(0, 0, 0, 0)) <= tol + 1e-9);
    CHECK(std::abs(acc[1] / nd - oracle.second_moment(0, 0, 0, 1)) <= tol + 1e-9);
    CHECK(std::abs(acc[2] / nd - oracle.second_moment(0, 0, 1, 0)) <= tol + 1e-9);
  }
}

TEST_CASE("oracle dependence ranges") {
  const ScansModel model = bernoulli_model(1, 3, 8, 1.0);
  CHECK(ScansOracle(model, ScansRegime::block_average).dependence_range() == 1);
  CHECK(ScansOracle(model, ScansRegime::unit).dependence_range() == 2);
  CHECK(ScansOracle(model, ScansRegime::block_average).rows() == 8);
  CHECK(ScansOracle(model, ScansRegime::unit).rows() == 64);
}

TEST_CASE("block rows two apart are uncorrelated") {
  const ScansModel model = bernoulli_model(1, 2, 10, 0.0);
  const ScansOracle oracle(model, ScansRegime::block_average);
  CHECK(oracle.second_moment(0, 0, 2, 0) == 0.0);
  CHECK(oracle.second_moment(0, 0, 1, 0) != 0.0);
}

TEST_CASE("dependency models by regime") {
  const ScansModel m1 = bernoulli_model(1, 1, 6, 0.0);
  const DependencyModel dep1 = scans_dependency_model(m1, ScansRegime::block_average);
  CHECK(dep1.neighborhoods[2] == std::vector<std::size_t>{2});  // m = 1: independent rows
  CHECK(validate_dependency_model(dep1).empty());

  const ScansModel m2 = bernoulli_model(1, 2, 6, 0.0);
  const DependencyModel dep2 = scans_dependency_model(m2, ScansRegime::block_average);
  CHECK(dep2.neighborhoods[2] == std::vector<std::size_t>{1, 2, 3});
  CHECK(validate_dependency_model(dep2).empty());

  const DependencyModel dep3 = scans_dependency_model(m2, ScansRegime::unit);
  CHECK(dep3.rows() == 36);
  CHECK(dep3.regime == DependencyModel::Regime::proposition_weak);
  CHECK(dep3.neighborhoods[5] == std::vector<std::size_t>{4, 5, 6});
  CHECK(validate_dependency_model(dep3).empty());
}

TEST_CASE("closed-form bound: structural zeros at m = 1") {
  const ScansModel model = bernoulli_model(1, 1, 100, 0.0);
  const BoundReport report =
      scans_bound(model, ScansRegime::block_average, scans_stats(model));
  REQUIRE(report.terms.size() == 7);
  CHECK(report.terms[3].value == 0.0);  // eps4
  CHECK(report.terms[4].value == 0.0);  // eps5
  CHECK(report.terms[6].value == 0.0);  // eps7
  CHECK(report.terms[0].value > 0.0);
  CHECK(report.total > 0.0);
}

TEST_CASE("closed-form bound decays like sqrt(log n / n)") {
  const ScansModel base = bernoulli_model(1, 1, 100, 0.0);
  const ScansStats stats = scans_stats(base);
  const std::uint64_t n = 1 << 14;
  ScansModel mn = base;
  mn.n = n;
  ScansModel m4n = base;
  m4n.n = 4 * n;
  const double bn = scans_bound(mn, ScansRegime::block_average, stats).total;
  const double b4n = scans_bound(m4n, ScansRegime::block_average, stats).total;
  const double predicted =
      0.5 * std::sqrt(std::log(8.0 * static_cast<double>(n)) /
                      std::log(2.0 * static_cast<double>(n)));
  CHECK(std::abs(b4n / bn - predicted) / predicted < 0.05);
}

TEST_CASE("model validation catches bad inputs") {
  ScansModel bad = bernoulli_model(1, 2, 2, 0.0);  // n <= m
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = bernoulli_model(1, 1, 4, 0.0);
  bad.probs = {0.5, 0.6};
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
