#include "mc_harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fclt {

int effective_threads() {
  if (const char* env = std::getenv("FCLT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_chunks(std::size_t chunks, const std::function<void(std::size_t)>& fn) {
  const std::size_t workers =
      std::min<std::size_t>(static_cast<std::size_t>(effective_threads()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks || failed.load()) return;
      try {
        fn(c);
      } catch (...) {
        if (!failed.exchange(true)) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  if (failed.load() && first_error) std::rethrow_exception(first_error);
}

double pairwise_sum(const std::vector<double>& xs) {
  // Recursive halving keeps the reduction order fixed by index.
  std::function<double(std::size_t, std::size_t)> rec = [&](std::size_t lo,
                                                            std::size_t hi) -> double {
    if (hi - lo == 0) return 0.0;
    if (hi - lo == 1) return xs[lo];
    const std::size_t mid = lo + (hi - lo) / 2;
    return rec(lo, mid) + rec(mid, hi);
  };
  return rec(0, xs.size());
}

McEstimate estimate(const PathFunctional& g, const PathSampler& sampler,
                    std::uint64_t samples, std::uint64_t seed) {
  if (samples < 100) throw std::invalid_argument("estimate: samples must be >= 100");
  const std::size_t chunks =
      static_cast<std::size_t>((samples + kPathChunkSize - 1) / kPathChunkSize);
  std::vector<double> sums(chunks, 0.0), sumsq(chunks, 0.0);
  std::atomic<std::int64_t> bad_index{-1};

  parallel_chunks(chunks, [&](std::size_t c) {
    RngStream rng(seed, static_cast<std::uint64_t>(c));
    const std::uint64_t lo = static_cast<std::uint64_t>(c) * kPathChunkSize;
    const std::uint64_t hi = std::min<std::uint64_t>(samples, lo + kPathChunkSize);
    double s = 0.0, s2 = 0.0;
    for (std::uint64_t i = lo; i < hi; ++i) {
      const PathGrid path = sampler(rng);
      const double v = g(path);
      if (!std::isfinite(v)) {
        std::int64_t expected = -1;
        bad_index.compare_exchange_strong(expected, static_cast<std::int64_t>(i));
        return;
      }
      s += v;
      s2 += v * v;
    }
    sums[c] = s;
    sumsq[c] = s2;
  });

  if (bad_index.load() >= 0) {
    std::ostringstream os;
    os << "non-finite functional value at sample " << bad_index.load();
    throw std::runtime_error(os.str());
  }

  const double total = pairwise_sum(sums);
  const double total2 = pairwise_sum(sumsq);
  const double nd = static_cast<double>(samples);
  McEstimate est;
  est.mean = total / nd;
  const double var = std::max(0.0, (total2 - nd * est.mean * est.mean) / (nd - 1.0));
  est.se = std::sqrt(var / nd);
  est.samples = samples;
  est.seed = seed;
  return est;
}

McEstimate distance(const PathFunctional& g, const PathSampler& sampler_y,
                    const PathSampler& sampler_z, std::uint64_t samples,
                    std::uint64_t seed) {
  const McEstimate ey = estimate(g, sampler_y, samples, seed);
  const McEstimate ez = estimate(g, sampler_z, samples, seed);
  McEstimate d;
  d.mean = std::abs(ey.mean - ez.mean);
  d.se = std::sqrt(ey.se * ey.se + ez.se * ez.se);
  d.samples = samples;
  d.seed = seed;
  return d;
}

RateFit rate_fit(const std::vector<std::pair<std::uint64_t, double>>& points) {
  if (points.size() < 4) throw std::invalid_argument("rate_fit: need at least 4 points");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].second <= 0.0) throw std::invalid_argument("rate_fit: nonpositive value");
    if (i > 0 && points[i].first <= points[i - 1].first)
      throw std::invalid_argument("rate_fit: n must be strictly increasing");
  }
  const double m = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, v] : points) {
    sx += std::log(static_cast<double>(n));
    sy += std::log(v);
  }
  const double mx = sx / m, my = sy / m;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [n, v] : points) {
    const double dx = std::log(static_cast<double>(n)) - mx;
    const double dy = std::log(v) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace fclt
