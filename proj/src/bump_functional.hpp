#ifndef FCLT_BUMP_FUNCTIONAL_HPP
#define FCLT_BUMP_FUNCTIONAL_HPP

#include <memory>

#include "functional.hpp"

namespace fclt {

// Smooth bump around a center path: phi applied to the excess of the
// regularized L^{p_n} distance over the plateau radius. phi is the degree-7
// smoothstep plateau (1 below 0, 0 above 1, C^3). The plain variant equals 1
// on the open gamma-ball around the center; the starred variant equals 0
// outside it for paths with constancy intervals >= r_n against an
// equicontinuous center (theta, delta admissible in the sense below).
class BumpFunctional final : public FunctionalSpec {
 public:
  enum class Variant { plain, starred };

  struct Params {
    double gamma = 1.0;    // radius, > 0
    double eps = 0.5;      // smoothing, in (0,1]
    double pn = 8.0;       // integrability, >= 4
    double eta = 0.5;      // slope, in (0,1]
    Variant variant = Variant::plain;
    // Starred variant only: theta in (0,1); delta > 0 a modulus of
    // continuity scale for the center; r_n > 0 the shortest constancy
    // interval of the tested paths.
    double theta = 0.5;
    double delta = 1.0;
    double rn = 1.0;
  };

  BumpFunctional(PathGrid center, Params params);

  const Params& params() const noexcept { return params_; }
  const PathGrid& center() const noexcept { return center_; }

  double eval(const PathGrid& w) const override;

  // ||.||_{p_n} of sqrt((eps gamma)^2 + |w - s|^2), exact on the merged grid
  // and evaluated in log space so large p_n cannot overflow.
  double inner_norm(const PathGrid& w) const;

  std::optional<double> norm_bound(NormClass c) const override;
  std::optional<double> first_derivative_weight_bound() const override;
  std::optional<double> indicator_direction_bound(int k, std::size_t lambda) const override;

  // Derivative-norm constants of the inner distance functional f:
  // ||Df|| <= 1/eta, ||D^2 f|| <= 2(p_n - 1)/(eta eps gamma),
  // ||D^3 f|| <= 15 p_n^2 / ((eps gamma)^2 eta).
  double inner_first_bound() const;
  double inner_second_bound() const;
  double inner_third_bound() const;

  // Chain-rule layers for the bump itself.
  double first_layer_bound() const;
  double second_layer_bound() const;
  double third_layer_bound() const;

 private:
  PathGrid center_;
  Params params_;
};

}  // namespace fclt

#endif
