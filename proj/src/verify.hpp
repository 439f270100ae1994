#ifndef FCLT_VERIFY_HPP
#define FCLT_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "bound_report.hpp"
#include "closed_bounds.hpp"
#include "cov_matrix.hpp"
#include "functional.hpp"
#include "gaussian_paths.hpp"
#include "local_bounds.hpp"
#include "mc_harness.hpp"
#include "scans_model.hpp"
#include "ustat_model.hpp"

namespace fclt {

// i.i.d. p-dimensional Gaussian summands with covariance Sigma.
struct IidModel {
  int p = 1;
  CovMatrix sigma;
  std::uint64_t n = 2;

  std::vector<double> third_abs_moments() const;   // E|X^{(m)}|^3
  std::vector<double> second_abs_moments() const;  // E|X^{(m)}|^2
};

struct VerifyOptions {
  std::uint64_t samples = 20000;        // paths per side of the distance
  std::uint64_t oracle_budget = 100000; // array draws for MC bound terms
  std::uint64_t seed = 1;
  int refinement = kDefaultRefinement;
};

// Outcome of one bound-dominance run: the empirical functional distance,
// the norm-weighted bound with every MC term inflated by +3 se, and the
// one-sided comparison dist.mean + 3 se <= bound.
struct VerifyReport {
  std::string regime;
  std::uint64_t n = 0;
  int p = 0;
  std::uint64_t seed = 0;
  std::uint64_t samples = 0;
  McEstimate dist;
  double bound = 0.0;
  double margin = 0.0;
  bool pass = false;
  BoundReport bound_report;

  std::string to_json() const;
  static VerifyReport from_json(const std::string& text);
  std::string csv_row() const;
  static std::string csv_header();
};

VerifyReport verify_scans(const ScansModel& model, ScansRegime regime, const FunctionalSpec& g,
                          const VerifyOptions& options);
VerifyReport verify_iid(const IidModel& model, const FunctionalSpec& g,
                        const VerifyOptions& options);
VerifyReport verify_ustat(const UStatModel& model, const FunctionalSpec& g,
                          const VerifyOptions& options);

// Identity suite for the Ornstein-Uhlenbeck machinery against a given joint
// covariance: stationarity, the semigroup decomposition at v in {0, 0.7, 50},
// the generator null on linear and quadratic cylinders, and the small-u
// generator/semigroup consistency.
struct SteinCheckLine {
  std::string name;
  bool pass = false;
  double value = 0.0;
  double tolerance = 0.0;
};

struct SteinCheckReport {
  std::vector<SteinCheckLine> lines;
  bool all_pass = true;
  std::string to_json() const;
};

SteinCheckReport stein_check(const DependencyModel& dep, const CovMatrix& cov_full,
                             std::uint64_t budget, std::uint64_t seed);

}  // namespace fclt

#endif
