#ifndef FCLT_MOMENT_ORACLE_HPP
#define FCLT_MOMENT_ORACLE_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "mc_harness.hpp"
#include "rng.hpp"

namespace fclt {

// Access to moments of the summand array {X_{i,k}}. Second moments are
// exact (analytic) for every oracle in the catalog; the nonlinear
// expectations inside the eps/delta terms go through seeded Monte Carlo over
// whole-array realizations. Arrays are row-major: X_{i,k} = x[i*p + k].
class MomentOracle {
 public:
  virtual ~MomentOracle() = default;

  virtual std::size_t rows() const = 0;
  virtual int dim() const = 0;

  // E[X_{i,k} X_{j,l}], symmetric under (i,k) <-> (j,l).
  virtual double second_moment(std::size_t i, int k, std::size_t j, int l) const = 0;

  // |i-j| beyond which second moments vanish; -1 means dense.
  virtual long dependence_range() const { return -1; }

  virtual bool can_sample() const { return false; }
  // One realization of the full array into out (rows*dim doubles).
  virtual void sample_array(RngStream& rng, std::span<double> out) const;

  // Monte Carlo expectation of expr over array realizations, with the
  // fixed-batch layout shared by all oracle estimates (see kMomentBatch).
  McEstimate generic_expectation(const std::function<double(std::span<const double>)>& expr,
                                 std::uint64_t budget, std::uint64_t seed) const;
};

// Batch layout for oracle Monte Carlo: fixed batch size, one stream per
// batch index, batch means in index order. Reproducible for any worker
// count and any thread schedule.
inline constexpr std::size_t kMomentBatch = 250;

// Batched MC over array realizations evaluating several statistics at once.
// For each realization, accumulate(x, slot_sums) must add every statistic's
// value into its slot; finalize(batch_means) maps per-batch slot means to
// per-batch outputs (identity for plain expectations, products for split
// expectations). Returns per-output (mean, se) via batch means.
struct BatchedExpectation {
  std::size_t slots = 0;
  std::size_t outputs = 0;
  std::function<void(std::span<const double> x, std::span<double> slot_sums)> accumulate;
  std::function<void(std::span<const double> slot_means, std::span<double> out)> finalize;
};

std::vector<McEstimate> batched_expectations(const MomentOracle& oracle,
                                             const BatchedExpectation& job,
                                             std::uint64_t budget, std::uint64_t seed);

}  // namespace fclt

#endif
