#ifndef FCLT_CYLINDER_FUNCTIONAL_HPP
#define FCLT_CYLINDER_FUNCTIONAL_HPP

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "functional.hpp"

namespace fclt {

// Smooth finite-dimensional outer map chi: R^m -> R with analytic gradient,
// Hessian, and certified suprema of its derivatives up to order three. The
// growth caps are sup_x |chi| / (1+|x|_inf^3) style weights used to certify
// the weighted norm classes; infinite entries mark an unavailable class.
struct OuterMap {
  std::string name;
  int arity = 1;

  virtual ~OuterMap() = default;
  virtual double value(std::span<const double> x) const = 0;
  virtual void gradient(std::span<const double> x, std::span<double> out) const = 0;
  virtual void hessian(std::span<const double> x, std::span<double> out) const = 0;  // m x m

  // Certified suprema over R^m.
  virtual double sup_value() const = 0;     // may be +inf
  virtual double sup_grad_norm() const = 0; // sup ||grad chi||_2
  virtual double sup_hess_norm() const = 0; // sup spectral norm upper bound
  virtual double sup_third_norm() const = 0;

  // sup over x of the class-M weighted ratios, certified:
  //   value / (1 + max_j |x_j|^3)   and   ||grad|| / (1 + max_j |x_j|^2) etc.
  virtual double weighted_value_bound() const = 0;  // vs 1 + |.|^3
  virtual double weighted_grad_bound() const = 0;   // vs 1 + |.|^2
  virtual double weighted_grad_bound_m2() const = 0;  // vs 1 + |.|
  virtual double weighted_hess_bound() const = 0;   // vs 1 + |.|
};

// Cylinder functional g(w) = chi(w^{(k_1)}(t_1), ..., w^{(k_m)}(t_m)).
// Coordinates are 0-based; times lie in [0,1].
class CylinderFunctional final : public FunctionalSpec {
 public:
  CylinderFunctional(std::shared_ptr<const OuterMap> chi, std::vector<double> times,
                     std::vector<int> coords);

  double eval(const PathGrid& w) const override;
  std::optional<double> norm_bound(NormClass c) const override;
  std::optional<double> first_derivative_weight_bound() const override;
  double directional_derivative(const PathGrid& w, const PathGrid& h) const override;
  // Window directions touch at most the projections on coordinate k, each
  // with |h^{(k_j)}(t_j)| <= 1, so the per-entry gradient cap certifies it.
  std::optional<double> indicator_direction_bound(int k, std::size_t lambda) const override;

  int arity() const noexcept { return static_cast<int>(times_.size()); }
  const std::vector<double>& times() const noexcept { return times_; }
  const std::vector<int>& coords() const noexcept { return coords_; }
  const OuterMap& outer() const noexcept { return *chi_; }

  // Projections (w^{(k_j)}(t_j))_j.
  void project(const PathGrid& w, std::span<double> out) const;

  // Df(w)[h] = sum_j d_j chi(proj w) h^{(k_j)}(t_j), analytic.
  double derivative_along(const PathGrid& w, const PathGrid& h) const;

  // D^2 f(w)[h, h] as the Hessian quadratic form in the projections of h.
  double second_derivative_quadratic(const PathGrid& w, std::span<const double> h_proj) const;

 private:
  std::shared_ptr<const OuterMap> chi_;
  std::vector<double> times_;
  std::vector<int> coords_;
};

// Catalog entries.
std::shared_ptr<const OuterMap> make_linear_map(std::vector<double> weights);
std::shared_ptr<const OuterMap> make_square_map(int arity);       // sum_j x_j^2
std::shared_ptr<const OuterMap> make_bounded_map(int arity, double scale);  // scale * sum tanh(x_j)
std::shared_ptr<const OuterMap> make_smoothstep_map();            // degree-7 smoothstep of x_1

// Scale making the certified M1 bound of scale * sum_j tanh equal to one.
double bounded_map_unit_m1_scale(int arity);

// Degree-7 smoothstep plateau function: 1 for x <= 0, 0 for x >= 1, C^3.
double smoothstep_plateau(double x);
double smoothstep_plateau_d1(double x);
double smoothstep_plateau_d2(double x);
double smoothstep_plateau_d3(double x);
// Certified suprema of |phi'|, |phi''|, |phi'''| (grid maximization at 1e-6,
// computed once).
double smoothstep_sup_d1();
double smoothstep_sup_d2();
double smoothstep_sup_d3();

}  // namespace fclt

#endif
