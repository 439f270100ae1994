#ifndef FCLT_OU_STEIN_HPP
#define FCLT_OU_STEIN_HPP

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "cov_matrix.hpp"
#include "cylinder_functional.hpp"
#include "dependency_model.hpp"
#include "functional.hpp"
#include "mc_harness.hpp"
#include "path_grid.hpp"
#include "rng.hpp"

namespace fclt {

// Array of i.i.d. standard Ornstein-Uhlenbeck coordinates X_{i,j}(u) plus the
// mixer Sigma_n^{1/2} that turns them into the correlated coefficients
// U = Sigma_n^{1/2} vec(X). Flattened index p*i + k.
struct OuArrayState {
  double u = 0.0;
  std::vector<double> x;                    // n*p OU coordinates
  std::shared_ptr<const CovMatrix> mixer;   // Sigma_n^{1/2}, (np) x (np)

  std::vector<double> mixed() const;  // U = mixer * x
};

// Fresh stationary state: every coordinate drawn N(0,1).
OuArrayState ou_stationary_state(std::shared_ptr<const CovMatrix> mixer, RngStream& rng);

// Exact OU transition over time v: x <- e^{-v} x + sigma(v) N(0,1) with
// sigma^2(v) = 1 - e^{-2v}, independently per coordinate.
OuArrayState ou_step(const OuArrayState& state, double v, RngStream& rng);

// The step path with coordinate k equal to sum_i U_{i,k}(u) J_{i,k}(t).
PathGrid wn_path(const OuArrayState& state, const DependencyModel& model, std::size_t grid_n);

struct StationaryDecompositionReport {
  double v = 0.0;
  double max_abs_deviation = 0.0;  // deviation of the worst entry (by dev/se)
  double max_dev_se = 0.0;         // MC standard error of that entry
  std::size_t entries = 0;         // simultaneous covariance comparisons
  bool within_3se = true;          // every entry inside its own 3 se band
  // Bonferroni band with family-wise level equal to one 3-sigma test; the
  // right yardstick when the entry count is large.
  double family_z = 3.0;
  bool within_family = true;
};

// Monte Carlo covariance (at all grid jump times) of W(.,u+v) - e^{-v} W(.,u)
// against sigma^2(v) * Cov(D_n), entrywise.
StationaryDecompositionReport check_stationary_decomposition(const DependencyModel& model,
                                                             const CovMatrix& cov_full, double u,
                                                             double v, std::uint64_t budget,
                                                             RngStream& rng);

using DnSampler = std::function<PathGrid(RngStream&)>;

// Sampler of the pre-limiting Gaussian process D_n for a given joint
// covariance; sym_sqrt is computed once.
DnSampler make_dn_sampler(const CovMatrix& cov_full, const DependencyModel& model,
                          std::size_t grid_n);

struct GeneratorValue {
  double value = 0.0;  // -Df(w)[w] + E D^2 f(w)[D_n, D_n]
  double se = 0.0;     // driven by the MC average of the quadratic form
};

// Generator of the path-valued OU dynamics applied to a cylinder functional;
// the second derivative is evaluated analytically per D_n draw (an m x m
// quadratic form in the projections), never by numerical differences.
GeneratorValue generator_apply(const CylinderFunctional& f, const PathGrid& w,
                               const DnSampler& dn_sampler, std::uint64_t budget,
                               std::uint64_t seed);

// Same generator with E D^2 f(w)[D_n, D_n] contracted against the exact
// covariance of the projections; exact (se = 0) given proj_cov.
double generator_apply_exact(const CylinderFunctional& f, const PathGrid& w,
                             const CovMatrix& proj_cov);

// Exact covariance of the cylinder projections of D_n under cov_full.
CovMatrix projection_covariance(const CylinderFunctional& f, const DependencyModel& model,
                                const CovMatrix& cov_full);

// (T_{n,u} f)(w) = E f(w e^{-u} + sigma(u) D_n), by Monte Carlo.
McEstimate semigroup_apply(const FunctionalSpec& f, const PathGrid& w, double ou_time,
                           const DnSampler& dn_sampler, std::uint64_t budget, std::uint64_t seed);

struct SolutionDerivativeBounds {
  double first = 0.0;   // ||D phi_n(g)||
  double second = 0.0;  // ||D^2 phi_n(g)||
  double lipschitz = 0.0;
};

// Bounds on the derivatives of the Stein solution phi_n(g):
//   A = ||g||_M (1 + (2/3)||w||^2 + (4/3) E||D_n||^2)
//   B = ||g||_M (1/2 + ||w||/3 + E||D_n||/3)
//   C = ||g||_M / 3   (the caller supplies the D^2 Lipschitz constant here)
SolutionDerivativeBounds solution_derivative_bounds(double g_norm_m, double e_norm_dn_1,
                                                    double e_norm_dn_2, double w_norm);

inline double ou_sigma(double v) { return std::sqrt(1.0 - std::exp(-2.0 * v)); }

// e^{-2v} below double precision: a step of this size is a fresh draw.
inline constexpr double kOuFreshStep = 50.0;

}  // namespace fclt

#endif
