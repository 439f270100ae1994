#include <doctest.h>

#include <stdexcept>

#include "dependency_model.hpp"

using namespace fclt;

namespace {

DependencyModel small_valid() {
  DependencyModel m;
  m.n = 3;
  m.p = 1;
  m.lambdas = {3};
  m.neighborhoods = independent_neighborhoods(3);
  return m;
}

}  // namespace

TEST_CASE("independent model validates") {
  const DependencyModel m = small_valid();
  CHECK(validate_dependency_model(m).empty());
}

TEST_CASE("missing self-loop is reported") {
  DependencyModel m = small_valid();
  m.neighborhoods[1] = {0, 2};  // row 2 references only rows 1 and 3
  const auto errors = validate_dependency_model(m);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("self-loop missing") != std::string::npos);
}

TEST_CASE("banded neighborhoods of the worked example validate") {
  DependencyModel m;
  m.n = 4;
  m.p = 2;
  m.lambdas = {4, 2};
  m.neighborhoods = banded_neighborhoods(4, 1);
  CHECK(validate_dependency_model(m).empty());
  CHECK(m.neighborhoods[0] == std::vector<std::size_t>{0, 1});
  CHECK(m.neighborhoods[2] == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("lambda range violations are reported") {
  DependencyModel m = small_valid();
  m.lambdas = {4};  // above n
  auto errors = validate_dependency_model(m);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("lambda out of range") != std::string::npos);

  m.lambdas = {0};
  errors = validate_dependency_model(m);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("lambda out of range") != std::string::npos);
}

TEST_CASE("neighborhood indices outside the row range are reported") {
  DependencyModel m = small_valid();
  m.neighborhoods[0] = {0, 5};
  const auto errors = validate_dependency_model(m);
  REQUIRE(errors.size() == 1);
  CHECK(errors[0].find("neighborhood out of range") != std::string::npos);
}

TEST_CASE("proposition-weak regime uses n^2 rows and squared caps") {
  DependencyModel m;
  m.n = 4;
  m.p = 2;
  m.regime = DependencyModel::Regime::proposition_weak;
  m.lambdas = {4, 2};
  m.neighborhoods = banded_neighborhoods(16, 1);
  CHECK(m.rows() == 16);
  CHECK(m.row_cap(0) == 16);
  CHECK(m.row_cap(1) == 4);
  CHECK(validate_dependency_model(m).empty());
}

TEST_CASE("require_valid throws with the violation list") {
  DependencyModel m = small_valid();
  m.neighborhoods[0] = {1};
  CHECK_THROWS_AS(require_valid(m), std::invalid_argument);
}
