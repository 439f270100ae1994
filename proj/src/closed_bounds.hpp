#ifndef FCLT_CLOSED_BOUNDS_HPP
#define FCLT_CLOSED_BOUNDS_HPP

#include <cstdint>
#include <vector>

#include "bound_report.hpp"
#include "cov_matrix.hpp"

namespace fclt {

// Deterministic closed-form bound for i.i.d. p-dimensional summands with
// covariance Sigma, against class-M functionals. third_abs_moments[m] is
// E|X^{(m)}|^3 and second_abs_moments[m] is E|X^{(m)}|^2.
BoundReport iid_bound(int p, std::uint64_t n, const CovMatrix& sigma,
                      const std::vector<double>& third_abs_moments,
                      const std::vector<double>& second_abs_moments);

// Deterministic closed-form bound for non-degenerate bivariate U-statistics,
// against class-M2 functionals. Throws "degenerate kernel" when
// sigma_w2 <= 0 and "variance identity violated" when sigma_h2 < 2 sigma_w2
// beyond a 1e-9 relative tolerance.
BoundReport ustat_bound(std::uint64_t n, double sigma_h2, double sigma_w2, double e_abs_w3,
                        double e_abs_w1);

}  // namespace fclt

#endif
