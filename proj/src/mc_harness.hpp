#ifndef FCLT_MC_HARNESS_HPP
#define FCLT_MC_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "path_grid.hpp"
#include "rng.hpp"

namespace fclt {

struct McEstimate {
  double mean = 0.0;
  double se = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
};

// Worker count: FCLT_THREADS when set to a positive integer, otherwise the
// hardware concurrency. Results never depend on it.
int effective_threads();

// Runs fn(chunk) for chunk = 0..chunks-1 on up to effective_threads()
// workers. Each chunk writes only to its own slot, so the schedule cannot
// affect the result.
void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& fn);

using PathSampler = std::function<PathGrid(RngStream&)>;
using PathFunctional = std::function<double(const PathGrid&)>;

// Fixed chunking: 1024 paths per chunk, chunk c drawing from stream
// (seed, c). Partial sums are reduced pairwise in chunk-index order, so the
// estimate is bit-identical for any worker count.
inline constexpr std::size_t kPathChunkSize = 1024;

McEstimate estimate(const PathFunctional& g, const PathSampler& sampler,
                    std::uint64_t samples, std::uint64_t seed);

// |E g(Y) - E g(Z)| with combined se = sqrt(se_y^2 + se_z^2). Both estimates
// use the same seed, so identical samplers give exactly zero.
McEstimate distance(const PathFunctional& g, const PathSampler& sampler_y,
                    const PathSampler& sampler_z, std::uint64_t samples,
                    std::uint64_t seed);

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

// Least squares on (log n, log value); requires >= 4 strictly increasing n
// and positive values.
RateFit rate_fit(const std::vector<std::pair<std::uint64_t, double>>& points);

// Order-fixed pairwise reduction of per-chunk partials.
double pairwise_sum(const std::vector<double>& xs);

}  // namespace fclt

#endif
