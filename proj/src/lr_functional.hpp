#ifndef FCLT_LR_FUNCTIONAL_HPP
#define FCLT_LR_FUNCTIONAL_HPP

#include "functional.hpp"

namespace fclt {

// g(w) = (int_0^1 |w(t)|^r dt)^{1/r}, r >= 2, computed exactly on step paths.
class LrNormFunctional final : public FunctionalSpec {
 public:
  explicit LrNormFunctional(double r);

  double exponent() const noexcept { return r_; }

  double eval(const PathGrid& w) const override;

  // 1-Lipschitz in the sup norm.
  std::optional<double> first_derivative_weight_bound() const override { return 1.0; }

  // (1/lambda)^{1/r}: certified bound for the delta_7 window directions.
  std::optional<double> indicator_direction_bound(int k, std::size_t lambda) const override;

 private:
  double r_;
};

}  // namespace fclt

#endif
