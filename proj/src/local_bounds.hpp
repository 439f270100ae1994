#ifndef FCLT_LOCAL_BOUNDS_HPP
#define FCLT_LOCAL_BOUNDS_HPP

#include <cstdint>

#include "bound_report.hpp"
#include "cov_matrix.hpp"
#include "dependency_model.hpp"
#include "functional.hpp"
#include "moment_oracle.hpp"

namespace fclt {

// The seven-term bound for locally dependent summands (regime local3).
// eps1..eps3 are Monte Carlo over array realizations (standard errors
// reported; structurally empty sums are exact zeros and skip sampling);
// eps4, eps5, eps7 come from second moments in closed form; eps6 is the
// Brownian modulus bound. The report's class weight is M1.
BoundReport eps_terms(const DependencyModel& model, const MomentOracle& oracle,
                      const CovMatrix& sigma, std::uint64_t budget, std::uint64_t seed);

// The seven-term bound for the n^2-summand piecewise-constant regime.
// delta4/delta5 compare grouped-block covariances; delta7 multiplies the
// functional's certified window-direction bound and enters unweighted.
BoundReport delta_terms(const DependencyModel& model, const MomentOracle& oracle,
                        const CovMatrix& sigma, const FunctionalSpec& g, std::uint64_t budget,
                        std::uint64_t seed);

}  // namespace fclt

#endif
