#include "ou_stein.hpp"

#include <cmath>
#include <stdexcept>

#include "gaussian_paths.hpp"
#include "moment_oracle.hpp"

namespace fclt {

std::vector<double> OuArrayState::mixed() const {
  const std::size_t d = x.size();
  if (!mixer || mixer->dim() != d) throw std::invalid_argument("OuArrayState: mixer mismatch");
  std::vector<double> u(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < d; ++j) acc += mixer->at(i, j) * x[j];
    u[i] = acc;
  }
  return u;
}

OuArrayState ou_stationary_state(std::shared_ptr<const CovMatrix> mixer, RngStream& rng) {
  OuArrayState s;
  s.u = 0.0;
  s.mixer = std::move(mixer);
  s.x.resize(s.mixer->dim());
  for (double& v : s.x) v = rng.next_gaussian();
  return s;
}

OuArrayState ou_step(const OuArrayState& state, double v, RngStream& rng) {
  if (v < 0.0) throw std::invalid_argument("ou_step: v must be >= 0");
  OuArrayState out = state;
  out.u = state.u + v;
  if (v == 0.0) return out;
  const double decay = std::exp(-v);
  const double noise = ou_sigma(v);
  for (double& c : out.x) c = decay * c + noise * rng.next_gaussian();
  return out;
}

PathGrid wn_path(const OuArrayState& state, const DependencyModel& model, std::size_t grid_n) {
  for (std::size_t lam : model.lambdas)
    if (model.indicator_jumps() && grid_n % lam != 0)
      throw std::invalid_argument("wn_path: grid incompatible with lambdas");
  const std::vector<double> u = state.mixed();
  return prelimit_path_from_coeffs(u, model, grid_n);
}

namespace {

// z with P(|N(0,1)| > z) = 0.0027 / entries: Bonferroni band whose
// family-wise level matches a single 3-sigma comparison.
double family_z_for(std::size_t entries) {
  const double alpha = 0.00135 / static_cast<double>(std::max<std::size_t>(entries, 1));
  double lo = 3.0, hi = 9.0;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double tail = 0.5 * std::erfc(mid / std::sqrt(2.0));
    (tail > alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Jump weight J_{i,k}(t) used by projections; indicator default.
double jump_weight(const DependencyModel& model, std::size_t i, int k, double t) {
  const std::size_t lam = model.lambdas[static_cast<std::size_t>(k)];
  if (i >= lam) return 0.0;
  if (model.indicator_jumps())
    return static_cast<double>(i + 1) / static_cast<double>(lam) <= t + 1e-15 ? 1.0 : 0.0;
  return model.jumps->eval(i, k, t);
}

}  // namespace

StationaryDecompositionReport check_stationary_decomposition(const DependencyModel& model,
                                                             const CovMatrix& cov_full, double u,
                                                             double v, std::uint64_t budget,
                                                             RngStream& rng) {
  if (budget < 1000) throw std::invalid_argument("check_stationary_decomposition: budget < 1e3");
  require_valid(model);
  const int p = model.p;
  const std::size_t np = static_cast<std::size_t>(p) * model.n;
  if (cov_full.dim() != np)
    throw std::invalid_argument("check_stationary_decomposition: covariance dim mismatch");

  // Projection entries: (k, jump index i), value = sum_{i' <= i} U_{i',k}.
  std::vector<std::pair<int, std::size_t>> slots;
  for (int k = 0; k < p; ++k)
    for (std::size_t i = 0; i < model.lambdas[static_cast<std::size_t>(k)]; ++i)
      slots.emplace_back(k, i);
  const std::size_t d = slots.size();

  // Exact target: sigma^2(v) * Cov over prefix sums of the Dn coefficients.
  const double s2 = 1.0 - std::exp(-2.0 * v);
  std::vector<double> target(d * d, 0.0);
  for (std::size_t a = 0; a < d; ++a) {
    for (std::size_t b = a; b < d; ++b) {
      const auto [k, ia] = slots[a];
      const auto [l, ib] = slots[b];
      double acc = 0.0;
      for (std::size_t i = 0; i <= ia; ++i)
        for (std::size_t j = 0; j <= ib; ++j)
          acc += cov_full.at(i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k),
                             j * static_cast<std::size_t>(p) + static_cast<std::size_t>(l));
      target[a * d + b] = s2 * acc;
      target[b * d + a] = s2 * acc;
    }
  }

  const auto mixer = std::make_shared<CovMatrix>(sym_sqrt(cov_full));
  const double decay = std::exp(-v);

  const std::size_t batches = static_cast<std::size_t>(budget / kMomentBatch);
  std::vector<double> batch_cov(batches * d * d, 0.0);
  parallel_chunks(batches, [&](std::size_t b) {
    RngStream stream(rng.seed(), mix64(rng.stream_id() ^ (b + 1)));
    std::vector<double> diff(d);
    double* acc = batch_cov.data() + b * d * d;
    for (std::size_t s = 0; s < kMomentBatch; ++s) {
      OuArrayState st0 = ou_stationary_state(mixer, stream);
      if (u > 0.0) st0 = ou_step(st0, u, stream);
      const OuArrayState st1 = ou_step(st0, v, stream);
      const std::vector<double> u0 = st0.mixed();
      const std::vector<double> u1 = st1.mixed();
      for (std::size_t a = 0; a < d; ++a) {
        const auto [k, ia] = slots[a];
        double pref = 0.0;
        for (std::size_t i = 0; i <= ia; ++i) {
          const std::size_t idx = i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k);
          pref += u1[idx] - decay * u0[idx];
        }
        diff[a] = pref;
      }
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t c = 0; c < d; ++c) acc[a * d + c] += diff[a] * diff[c];
    }
    for (std::size_t i = 0; i < d * d; ++i) acc[i] /= static_cast<double>(kMomentBatch);
  });

  // Every covariance entry must sit inside its own band; the reported
  // numbers belong to the entry with the worst deviation-to-band ratio.
  StationaryDecompositionReport report;
  report.v = v;
  report.entries = d * d;
  report.family_z = family_z_for(report.entries);
  const double nb = static_cast<double>(batches);
  double worst_ratio = -1.0;
  for (std::size_t e = 0; e < d * d; ++e) {
    std::vector<double> vals(batches);
    for (std::size_t b = 0; b < batches; ++b) vals[b] = batch_cov[b * d * d + e];
    const double mean = pairwise_sum(vals) / nb;
    double ss = 0.0;
    for (double x : vals) ss += (x - mean) * (x - mean);
    const double se = batches > 1 ? std::sqrt(ss / (nb * (nb - 1.0))) : 0.0;
    const double dev = std::abs(mean - target[e]);
    if (dev > 0.0 && dev > 3.0 * se) report.within_3se = false;
    if (dev > 0.0 && dev > report.family_z * se) report.within_family = false;
    const double ratio = se > 0.0 ? dev / se : (dev > 0.0 ? 1e300 : 0.0);
    if (ratio > worst_ratio) {
      worst_ratio = ratio;
      report.max_abs_deviation = dev;
      report.max_dev_se = se;
    }
  }
  return report;
}

DnSampler make_dn_sampler(const CovMatrix& cov_full, const DependencyModel& model,
                          std::size_t grid_n) {
  const std::size_t np = static_cast<std::size_t>(model.p) * model.n;
  if (cov_full.dim() != np) throw std::invalid_argument("make_dn_sampler: covariance dim mismatch");
  if (np > kDenseDimensionCap)
    throw std::invalid_argument("dimension overflow: np exceeds the dense sampling cap");
  const auto root = std::make_shared<CovMatrix>(sym_sqrt(cov_full));
  const DependencyModel m = model;
  return [root, m, grid_n, np](RngStream& rng) {
    std::vector<double> g(np), z(np, 0.0);
    for (double& x : g) x = rng.next_gaussian();
    for (std::size_t i = 0; i < np; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < np; ++j) acc += root->at(i, j) * g[j];
      z[i] = acc;
    }
    return prelimit_path_from_coeffs(z, m, grid_n);
  };
}

GeneratorValue generator_apply(const CylinderFunctional& f, const PathGrid& w,
                               const DnSampler& dn_sampler, std::uint64_t budget,
                               std::uint64_t seed) {
  const double drift = f.derivative_along(w, w);
  const std::size_t m = static_cast<std::size_t>(f.arity());
  const McEstimate quad = estimate(
      [&f, &w, m](const PathGrid& d) {
        std::vector<double> proj(m);
        f.project(d, proj);
        return f.second_derivative_quadratic(w, proj);
      },
      dn_sampler, budget, seed);
  GeneratorValue out;
  out.value = -drift + quad.mean;
  out.se = quad.se;
  return out;
}

CovMatrix projection_covariance(const CylinderFunctional& f, const DependencyModel& model,
                                const CovMatrix& cov_full) {
  const int p = model.p;
  const std::size_t m = static_cast<std::size_t>(f.arity());
  CovMatrix cov(m);
  for (std::size_t a = 0; a < m; ++a) {
    for (std::size_t b = a; b < m; ++b) {
      const int ka = f.coords()[a];
      const int kb = f.coords()[b];
      double acc = 0.0;
      for (std::size_t i = 0; i < model.lambdas[static_cast<std::size_t>(ka)]; ++i) {
        const double wa = jump_weight(model, i, ka, f.times()[a]);
        if (wa == 0.0) continue;
        for (std::size_t j = 0; j < model.lambdas[static_cast<std::size_t>(kb)]; ++j) {
          const double wb = jump_weight(model, j, kb, f.times()[b]);
          if (wb == 0.0) continue;
          acc += wa * wb *
                 cov_full.at(i * static_cast<std::size_t>(p) + static_cast<std::size_t>(ka),
                             j * static_cast<std::size_t>(p) + static_cast<std::size_t>(kb));
        }
      }
      cov.at(a, b) = acc;
      cov.at(b, a) = acc;
    }
  }
  return cov;
}

double generator_apply_exact(const CylinderFunctional& f, const PathGrid& w,
                             const CovMatrix& proj_cov) {
  const std::size_t m = static_cast<std::size_t>(f.arity());
  std::vector<double> x(m), hess(m * m);
  f.project(w, x);
  f.outer().hessian(x, hess);
  double trace_term = 0.0;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) trace_term += hess[a * m + b] * proj_cov.at(a, b);
  return -f.derivative_along(w, w) + trace_term;
}

McEstimate semigroup_apply(const FunctionalSpec& f, const PathGrid& w, double ou_time,
                           const DnSampler& dn_sampler, std::uint64_t budget,
                           std::uint64_t seed) {
  if (ou_time < 0.0) throw std::invalid_argument("semigroup_apply: u must be >= 0");
  const double decay = std::exp(-ou_time);
  const double noise = ou_sigma(ou_time);
  return estimate(
      [&f, &w, decay, noise](const PathGrid& d) {
        PathGrid mixed = d;
        mixed.axpby(noise, decay, w);
        return f.eval(mixed);
      },
      dn_sampler, budget, seed);
}

SolutionDerivativeBounds solution_derivative_bounds(double g_norm_m, double e_norm_dn_1,
                                                    double e_norm_dn_2, double w_norm) {
  if (g_norm_m < 0.0 || e_norm_dn_1 < 0.0 || e_norm_dn_2 < 0.0 || w_norm < 0.0)
    throw std::invalid_argument("solution_derivative_bounds: inputs must be >= 0");
  SolutionDerivativeBounds b;
  b.first = g_norm_m * (1.0 + (2.0 / 3.0) * w_norm * w_norm + (4.0 / 3.0) * e_norm_dn_2);
  b.second = g_norm_m * (0.5 + w_norm / 3.0 + e_norm_dn_1 / 3.0);
  b.lipschitz = g_norm_m / 3.0;
  return b;
}

}  // namespace fclt
