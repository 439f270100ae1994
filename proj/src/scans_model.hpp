#ifndef FCLT_SCANS_MODEL_HPP
#define FCLT_SCANS_MODEL_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "bound_report.hpp"
#include "cov_matrix.hpp"
#include "dependency_model.hpp"
#include "functional.hpp"
#include "moment_oracle.hpp"
#include "path_grid.hpp"
#include "rng.hpp"

namespace fclt {

// Moving-window exceedance counts of the m-scans process R_{i,k} =
// sum_{l<m} V_{i+l,k} against thresholds a_k, for i.i.d. innovation vectors
// V_j with a finite discrete law (atoms in R^p with probabilities).
struct ScansModel {
  int p = 1;
  int m = 1;
  std::uint64_t n = 2;  // horizon; requires n > m
  std::vector<double> thresholds;           // a, size p
  std::vector<std::vector<double>> atoms;   // each of size p
  std::vector<double> probs;                // same count as atoms, sums to 1

  void validate() const;  // throws std::invalid_argument
};

// Which scaling builds the partial-sum path.
enum class ScansRegime {
  block_average,  // X_{i,k} = (1/n) sum_{j<=n} 1[R_{n(i-1)+j,k} <= a_k] - pi_k, n jumps
  unit,           // X_{i,k} = (1/n) (1[R_{i,k} <= a_k] - pi_k), n^2 jumps
};

// Enumeration cap: joint states above this require sampling.
inline constexpr std::uint64_t kScansStateCap = 1000000;

// pi_k = P(R_{1,k} <= a_k), exact enumeration over the m-fold product.
std::vector<double> scans_pi(const ScansModel& model);

// psi_{k,l}(d) = P[R_{d+1,k} <= a_k, R_{1,l} <= a_l] - pi_k pi_l, exact
// enumeration over the (m+d)-fold product; row-major p x p.
std::vector<double> scans_psi(const ScansModel& model, int lag);

// Monte Carlo fall-backs used above the state cap.
std::vector<McEstimate> scans_pi_mc(const ScansModel& model, std::uint64_t budget,
                                    std::uint64_t seed);
std::vector<McEstimate> scans_psi_mc(const ScansModel& model, int lag, std::uint64_t budget,
                                     std::uint64_t seed);

// Precomputed exceedance statistics shared by the oracle, bounds and paths.
struct ScansStats {
  std::vector<double> pi;                 // size p
  std::vector<std::vector<double>> psi;   // psi[d] row-major p x p, d = 0..m-1
  double psi_at(int d, int k, int l, int p) const {
    return psi[static_cast<std::size_t>(d)][static_cast<std::size_t>(k) *
                                                static_cast<std::size_t>(p) +
                                            static_cast<std::size_t>(l)];
  }
};

ScansStats scans_stats(const ScansModel& model);

// Sigma_{k,l} = psi_{k,l}(0) + sum_{d=1}^{m-1} (psi_{l,k}(d) + psi_{k,l}(d)).
CovMatrix scans_sigma(const ScansModel& model, const ScansStats& stats);

// One partial-sum path on the grid refinement * (n or n^2). All coordinates
// share one innovation stream.
PathGrid scans_sample_path(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                           RngStream& rng, int refinement);

// One realization of the summand array X (rows x p, row-major): n rows in
// the block-average regime, n^2 in the unit regime.
void scans_fill_array(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                      RngStream& rng, std::span<double> out);

// Dependence structure induced by the scans construction: adjacent blocks
// overlap in at most m-1 innovations (independent rows when m = 1); the unit
// regime is banded with radius m-1.
DependencyModel scans_dependency_model(const ScansModel& model, ScansRegime regime);

// Analytic second moments plus array sampling for the generic bound terms.
class ScansOracle final : public MomentOracle {
 public:
  ScansOracle(ScansModel model, ScansRegime regime);

  std::size_t rows() const override;
  int dim() const override { return model_.p; }
  double second_moment(std::size_t i, int k, std::size_t j, int l) const override;
  long dependence_range() const override;
  bool can_sample() const override { return true; }
  void sample_array(RngStream& rng, std::span<double> out) const override;

  const ScansStats& stats() const noexcept { return stats_; }
  const ScansModel& model() const noexcept { return model_; }

 private:
  ScansModel model_;
  ScansRegime regime_;
  ScansStats stats_;
};

// The itemized closed-form bounds of the worked exceedance examples,
// assembled from psi and pi. The unit regime needs the functional's
// certified window-direction bound for the last term.
BoundReport scans_bound(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                        const FunctionalSpec* g = nullptr);

}  // namespace fclt

#endif
