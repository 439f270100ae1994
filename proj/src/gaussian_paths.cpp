#include "gaussian_paths.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fclt {

std::size_t common_grid_size(const std::vector<std::size_t>& lambdas, int refinement) {
  if (lambdas.empty()) throw std::invalid_argument("common_grid_size: no lambdas");
  std::size_t l = 1;
  bool lcm_ok = lambdas.size() <= 4;
  if (lcm_ok) {
    for (std::size_t lam : lambdas) {
      l = std::lcm(l, lam);
      if (l > (1u << 20)) {
        lcm_ok = false;
        break;
      }
    }
  }
  if (!lcm_ok) l = *std::max_element(lambdas.begin(), lambdas.end());
  return static_cast<std::size_t>(refinement) * l;
}

PathGrid sample_correlated_bm(const CovMatrix& sigma, std::size_t grid_n, RngStream& rng) {
  if (grid_n < 1) throw std::invalid_argument("sample_correlated_bm: grid_n must be >= 1");
  const std::size_t p = sigma.dim();
  const CovMatrix s = sym_sqrt(sigma);
  PathGrid path(grid_n, static_cast<int>(p));
  std::vector<double> b(p, 0.0);
  const double step_sd = std::sqrt(1.0 / static_cast<double>(grid_n));
  for (std::size_t q = 1; q <= grid_n; ++q) {
    for (std::size_t k = 0; k < p; ++k) b[k] += step_sd * rng.next_gaussian();
    double* out = path.point(q);
    for (std::size_t k = 0; k < p; ++k) {
      double acc = 0.0;
      for (std::size_t l = 0; l < p; ++l) acc += s.at(k, l) * b[l];
      out[k] = acc;
    }
  }
  return path;
}

PathGrid prelimit_path_from_coeffs(std::span<const double> z, const DependencyModel& model,
                                   std::size_t grid_n) {
  const int p = model.p;
  PathGrid path(grid_n, p);
  if (model.indicator_jumps()) {
    // Coordinate k accumulates jumps of Ztilde_{i,k} at (i+1)/lambda_k.
    std::vector<double> level(static_cast<std::size_t>(p), 0.0);
    std::vector<std::size_t> next_jump(static_cast<std::size_t>(p), 0);
    for (std::size_t q = 1; q <= grid_n; ++q) {
      for (int k = 0; k < p; ++k) {
        const std::size_t lam = model.lambdas[static_cast<std::size_t>(k)];
        // jump i (0-based) lands at grid index (i+1)*grid_n/lambda when divisible
        while (next_jump[k] < lam) {
          const double jump_time = static_cast<double>(next_jump[k] + 1) / static_cast<double>(lam);
          const double grid_time = static_cast<double>(q) / static_cast<double>(grid_n);
          if (jump_time > grid_time + 1e-15) break;
          level[k] += z[next_jump[k] * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)];
          ++next_jump[k];
        }
        path.at(q, k) = level[k];
      }
    }
  } else {
    for (std::size_t q = 0; q <= grid_n; ++q) {
      const double t = static_cast<double>(q) / static_cast<double>(grid_n);
      for (int k = 0; k < p; ++k) {
        const std::size_t lam = model.lambdas[static_cast<std::size_t>(k)];
        double acc = 0.0;
        for (std::size_t i = 0; i < lam; ++i)
          acc += z[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)] *
                 model.jumps->eval(i, k, t);
        path.at(q, k) = acc;
      }
    }
  }
  return path;
}

PathGrid sample_prelimit_gaussian(const CovMatrix& cov_full, const DependencyModel& model,
                                  std::size_t grid_n, RngStream& rng) {
  const std::size_t np = static_cast<std::size_t>(model.p) * model.n;
  if (cov_full.dim() != np)
    throw std::invalid_argument("sample_prelimit_gaussian: covariance dimension mismatch");
  if (np > kDenseDimensionCap)
    throw std::invalid_argument("dimension overflow: np exceeds the dense sampling cap");
  const CovMatrix s = sym_sqrt(cov_full);
  std::vector<double> g(np);
  for (double& v : g) v = rng.next_gaussian();
  std::vector<double> z(np, 0.0);
  for (std::size_t i = 0; i < np; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < np; ++j) acc += s.at(i, j) * g[j];
    z[i] = acc;
  }
  return prelimit_path_from_coeffs(z, model, grid_n);
}

CoupledPair sample_coupled_pair(const CovMatrix& sigma, const std::vector<std::size_t>& lambdas,
                                std::size_t grid_n, RngStream& rng) {
  for (std::size_t lam : lambdas)
    if (lam == 0 || grid_n % lam != 0)
      throw std::invalid_argument("grid incompatible with lambdas");
  if (lambdas.size() != sigma.dim())
    throw std::invalid_argument("sample_coupled_pair: lambda count mismatch");

  CoupledPair pair;
  pair.z = sample_correlated_bm(sigma, grid_n, rng);
  const int p = static_cast<int>(sigma.dim());
  pair.a_tilde = PathGrid(grid_n, p);
  for (int j = 0; j < p; ++j) {
    const std::size_t stride = grid_n / lambdas[static_cast<std::size_t>(j)];
    for (std::size_t q = 0; q <= grid_n; ++q) {
      const std::size_t frozen = (q / stride) * stride;  // floor(lambda t)/lambda on the grid
      pair.a_tilde.at(q, j) = pair.z.at(frozen, j);
    }
  }
  return pair;
}

double coupling_sup_distance(const CoupledPair& pair) {
  const std::size_t n = pair.z.grid_n();
  const int p = pair.z.dim();
  double best = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double* frozen = pair.a_tilde.point(q);
    for (std::size_t end : {q, q + 1}) {
      const double* zv = pair.z.point(end);
      double s = 0.0;
      for (int k = 0; k < p; ++k) {
        const double d = zv[k] - frozen[k];
        s += d * d;
      }
      if (s > best) best = s;
    }
  }
  return std::sqrt(best);
}

double modulus_bound(const std::vector<std::size_t>& lambdas, const CovMatrix& sigma) {
  if (lambdas.size() != sigma.dim())
    throw std::invalid_argument("modulus_bound: lambda count mismatch");
  double log_sum = 0.0;
  for (std::size_t lam : lambdas) {
    if (lam < 1) throw std::invalid_argument("modulus_bound: lambda must be >= 1");
    log_sum += std::log(2.0 * static_cast<double>(lam)) / static_cast<double>(lam);
  }
  const double trace = sigma.trace();
  const double c = 6.0 * std::sqrt(5.0) / std::sqrt(2.0 * std::log(2.0));
  return c * std::sqrt(log_sum) * std::sqrt(trace);
}

}  // namespace fclt
