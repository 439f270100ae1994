#include "moment_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace fclt {

void MomentOracle::sample_array(RngStream&, std::span<double>) const {
  throw std::runtime_error("moment unavailable: oracle cannot sample arrays");
}

std::vector<McEstimate> batched_expectations(const MomentOracle& oracle,
                                             const BatchedExpectation& job,
                                             std::uint64_t budget, std::uint64_t seed) {
  if (budget < 1000) throw std::invalid_argument("MC budget must be >= 1000");
  if (!oracle.can_sample())
    throw std::runtime_error("moment unavailable: oracle cannot sample arrays");

  const std::size_t batches = static_cast<std::size_t>(budget / kMomentBatch);
  const std::size_t cells = oracle.rows() * static_cast<std::size_t>(oracle.dim());

  std::vector<double> batch_out(batches * job.outputs, 0.0);
  parallel_chunks(batches, [&](std::size_t b) {
    RngStream rng(seed, static_cast<std::uint64_t>(b));
    std::vector<double> x(cells);
    std::vector<double> slot_sums(job.slots, 0.0);
    for (std::size_t s = 0; s < kMomentBatch; ++s) {
      oracle.sample_array(rng, x);
      job.accumulate(x, slot_sums);
    }
    for (double& v : slot_sums) v /= static_cast<double>(kMomentBatch);
    job.finalize(slot_sums, {batch_out.data() + b * job.outputs, job.outputs});
  });

  std::vector<McEstimate> result(job.outputs);
  const double nb = static_cast<double>(batches);
  for (std::size_t o = 0; o < job.outputs; ++o) {
    std::vector<double> vals(batches);
    for (std::size_t b = 0; b < batches; ++b) vals[b] = batch_out[b * job.outputs + o];
    const double mean = pairwise_sum(vals) / nb;
    double ss = 0.0;
    for (double v : vals) ss += (v - mean) * (v - mean);
    McEstimate est;
    est.mean = mean;
    est.se = batches > 1 ? std::sqrt(ss / (nb * (nb - 1.0))) : 0.0;
    est.samples = batches * kMomentBatch;
    est.seed = seed;
    result[o] = est;
  }
  return result;
}

McEstimate MomentOracle::generic_expectation(
    const std::function<double(std::span<const double>)>& expr, std::uint64_t budget,
    std::uint64_t seed) const {
  BatchedExpectation job;
  job.slots = 1;
  job.outputs = 1;
  job.accumulate = [&expr](std::span<const double> x, std::span<double> sums) {
    sums[0] += expr(x);
  };
  job.finalize = [](std::span<const double> means, std::span<double> out) {
    out[0] = means[0];
  };
  return batched_expectations(*this, job, budget, seed)[0];
}

}  // namespace fclt
