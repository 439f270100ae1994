#ifndef FCLT_GAUSSIAN_PATHS_HPP
#define FCLT_GAUSSIAN_PATHS_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "cov_matrix.hpp"
#include "dependency_model.hpp"
#include "path_grid.hpp"
#include "rng.hpp"

namespace fclt {

// Common grid for processes with per-coordinate jump spacing 1/lambda_j:
// refinement R times the lcm of the lambdas when p <= 4 and the lcm stays
// below 2^20, else R times max(lambda). In the latter case jump times that
// miss the grid are a documented discretization, not an error.
inline constexpr int kDefaultRefinement = 16;
std::size_t common_grid_size(const std::vector<std::size_t>& lambdas, int refinement);

// Z(q/N) = Sigma^{1/2} B(q/N) from independent Gaussian increments of
// variance 1/N per coordinate of B; Z(0) = 0.
PathGrid sample_correlated_bm(const CovMatrix& sigma, std::size_t grid_n, RngStream& rng);

// Dense cap for np-dimensional Gaussian sampling.
inline constexpr std::size_t kDenseDimensionCap = 4096;

// Pre-limiting Gaussian step process: coordinate k jumps at (i+1)/lambda_k
// by Ztilde_{i,k}, with the flattened vector (index p*i + k) jointly
// N(0, cov_full). cov_full must be (np) x (np) with np <= the dense cap.
// Uses the model's jump descriptors when they are not plain indicators.
PathGrid sample_prelimit_gaussian(const CovMatrix& cov_full, const DependencyModel& model,
                                  std::size_t grid_n, RngStream& rng);

// Same construction from a pre-drawn coefficient vector z (length n*p).
PathGrid prelimit_path_from_coeffs(std::span<const double> z, const DependencyModel& model,
                                   std::size_t grid_n);

struct CoupledPair {
  PathGrid z;        // Sigma^{1/2} B on the grid
  PathGrid a_tilde;  // coordinate j frozen at l/lambda_j
};

// One Brownian draw and its per-coordinate freeze on the lambda_j grids;
// requires every lambda_j to divide grid_n.
CoupledPair sample_coupled_pair(const CovMatrix& sigma, const std::vector<std::size_t>& lambdas,
                                std::size_t grid_n, RngStream& rng);

// sup_t |Z(t) - A(t)| for continuous Z against the frozen step path: each
// grid segment contributes both its left endpoint and the left limit at its
// right end, which is where the difference against a freeze peaks.
double coupling_sup_distance(const CoupledPair& pair);

// (6 sqrt(5) / sqrt(2 log 2)) * (sum_i log(2 lambda_i)/lambda_i)^{1/2}
//                             * (sum_i Sigma_{i,i})^{1/2}.
double modulus_bound(const std::vector<std::size_t>& lambdas, const CovMatrix& sigma);

}  // namespace fclt

#endif
