#ifndef FCLT_USTAT_MODEL_HPP
#define FCLT_USTAT_MODEL_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include "mc_harness.hpp"
#include "path_grid.hpp"
#include "rng.hpp"

namespace fclt {

// Non-degenerate bivariate U-statistic over i.i.d. standard normal
// innovations: symmetric centered kernel h with projection
// w(x) = E h(X_1, x). Catalog kernels ship analytic projections and moments.
struct UStatModel {
  std::string kernel_name;
  std::function<double(double, double)> h;
  std::function<double(double)> w;  // analytic projection; may be empty
  bool has_analytic_moments = false;
  double sigma_w2 = 0.0;
  double sigma_h2 = 0.0;
  double e_abs_w1 = 0.0;
  double e_abs_w3 = 0.0;
  std::uint64_t n = 2;  // horizon

  static UStatModel from_catalog(const std::string& name, std::uint64_t n);
};

struct UStatProjection {
  McEstimate sigma_w2;
  McEstimate sigma_h2;
  McEstimate e_abs_w1;
  McEstimate e_abs_w3;
};

// Projection moments: analytic values (se = 0) when the kernel carries them,
// else nested Monte Carlo (inner budget per evaluation point). Throws
// "degenerate kernel" when sigma_w^2 <= 3 se.
UStatProjection ustat_projection(const UStatModel& model, std::uint64_t budget,
                                 std::uint64_t seed);

struct UStatPaths {
  PathGrid y;        // n^{-3/2}/(sigma_w t) sum_{i<j<=floor(nt)} h(X_i, X_j)
  PathGrid y_tilde;  // same with h replaced by w(X_i) + w(X_j)
};

// Both paths from one innovation stream, on the grid refinement * n. The
// empty sum below two summands gives zero; between jumps the path is frozen
// at its value from the left jump time l/n (where the 1/t prefactor is
// evaluated), which preserves the sup norm exactly.
UStatPaths ustat_paths(const UStatModel& model, RngStream& rng, int refinement);

// sup_t |Y - Ytilde| for one draw, computed at the jump levels.
double ustat_coupling_sup(const UStatPaths& paths);

}  // namespace fclt

#endif
