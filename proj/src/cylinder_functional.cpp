#include "cylinder_functional.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fclt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// sup_t t/(1+t^3) = sup_t t^2/(1+t^3), attained at t^3 = 1/2 resp. t^3 = 2.
constexpr double kCubicWeightRatio = 0.529133684525;

double smoothstep_raw(double x) {  // 0 -> 0, 1 -> 1
  const double x2 = x * x;
  const double x4 = x2 * x2;
  return x4 * (35.0 - 84.0 * x + 70.0 * x2 - 20.0 * x2 * x);
}
double smoothstep_raw_d1(double x) {
  const double a = x * (1.0 - x);
  return 140.0 * a * a * a;
}
double smoothstep_raw_d2(double x) {
  const double a = x * (1.0 - x);
  return 420.0 * a * a * (1.0 - 2.0 * x);
}
double smoothstep_raw_d3(double x) {
  return 840.0 * x * (1.0 - x) * (1.0 - 5.0 * x + 5.0 * x * x);
}

double grid_max_abs(double (*f)(double)) {
  // 1e-6 resolution over [0,1]; the derivative suprema feed certified
  // bounds, so nudge the result up by a hair past the discretization error.
  const int steps = 1000000;
  double best = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double v = std::abs(f(static_cast<double>(i) / steps));
    if (v > best) best = v;
  }
  return best * (1.0 + 1e-6) + 1e-12;
}

}  // namespace

double smoothstep_plateau(double x) {
  if (x <= 0.0) return 1.0;
  if (x >= 1.0) return 0.0;
  return 1.0 - smoothstep_raw(x);
}
double smoothstep_plateau_d1(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -smoothstep_raw_d1(x);
}
double smoothstep_plateau_d2(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -smoothstep_raw_d2(x);
}
double smoothstep_plateau_d3(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return -smoothstep_raw_d3(x);
}

double smoothstep_sup_d1() {
  static const double v = grid_max_abs(&smoothstep_raw_d1);
  return v;
}
double smoothstep_sup_d2() {
  static const double v = grid_max_abs(&smoothstep_raw_d2);
  return v;
}
double smoothstep_sup_d3() {
  static const double v = grid_max_abs(&smoothstep_raw_d3);
  return v;
}

CylinderFunctional::CylinderFunctional(std::shared_ptr<const OuterMap> chi,
                                       std::vector<double> times, std::vector<int> coords)
    : chi_(std::move(chi)), times_(std::move(times)), coords_(std::move(coords)) {
  if (times_.size() != coords_.size() || times_.empty())
    throw std::invalid_argument("cylinder: times/coords size mismatch");
  if (static_cast<int>(times_.size()) != chi_->arity)
    throw std::invalid_argument("cylinder: outer map arity mismatch");
  for (double t : times_)
    if (!(t >= 0.0 && t <= 1.0)) throw std::invalid_argument("cylinder: time outside [0,1]");
}

void CylinderFunctional::project(const PathGrid& w, std::span<double> out) const {
  for (std::size_t j = 0; j < times_.size(); ++j)
    out[j] = w.eval_coord(times_[j], coords_[j]);
}

double CylinderFunctional::eval(const PathGrid& w) const {
  std::vector<double> x(times_.size());
  project(w, x);
  return chi_->value(x);
}

double CylinderFunctional::derivative_along(const PathGrid& w, const PathGrid& h) const {
  const std::size_t m = times_.size();
  std::vector<double> x(m), grad(m), hx(m);
  project(w, x);
  chi_->gradient(x, grad);
  project(h, hx);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j) acc += grad[j] * hx[j];
  return acc;
}

double CylinderFunctional::directional_derivative(const PathGrid& w, const PathGrid& h) const {
  return derivative_along(w, h);
}

double CylinderFunctional::second_derivative_quadratic(const PathGrid& w,
                                                       std::span<const double> h_proj) const {
  const std::size_t m = times_.size();
  std::vector<double> x(m), hess(m * m);
  project(w, x);
  chi_->hessian(x, hess);
  double acc = 0.0;
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t l = 0; l < m; ++l) acc += hess[j * m + l] * h_proj[j] * h_proj[l];
  return acc;
}

std::optional<double> CylinderFunctional::indicator_direction_bound(int k, std::size_t) const {
  const double cap = chi_->sup_grad_norm();
  if (!std::isfinite(cap)) return std::nullopt;
  double count = 0.0;
  for (int c : coords_)
    if (c == k) count += 1.0;
  return count * cap;
}

std::optional<double> CylinderFunctional::first_derivative_weight_bound() const {
  const double m = static_cast<double>(times_.size());
  const double b = std::sqrt(m) * chi_->weighted_grad_bound();
  return std::isfinite(b) ? std::optional<double>(b) : std::nullopt;
}

std::optional<double> CylinderFunctional::norm_bound(NormClass c) const {
  // |proj_j(w)| <= ||w||, so outer-map weighted ratios against max_j |x_j|
  // dominate the path-space ratios against ||w||.
  const double m = static_cast<double>(times_.size());
  const double rm = std::sqrt(m);
  const double lip = std::pow(m, 1.5) * chi_->sup_third_norm();
  double total = 0.0;
  switch (c) {
    case NormClass::M0:
      total = chi_->sup_value() + rm * chi_->sup_grad_norm() + m * chi_->sup_hess_norm() + lip;
      break;
    case NormClass::M1:
      total = chi_->weighted_value_bound() + rm * chi_->sup_grad_norm() +
              m * chi_->sup_hess_norm() + lip;
      break;
    case NormClass::M2:
      total = chi_->weighted_value_bound() + rm * chi_->weighted_grad_bound_m2() +
              m * chi_->weighted_hess_bound() + lip;
      break;
    case NormClass::M:
      total = chi_->weighted_value_bound() + rm * chi_->weighted_grad_bound() +
              m * chi_->weighted_hess_bound() + lip;
      break;
  }
  if (!std::isfinite(total)) return std::nullopt;
  return total;
}

namespace {

class LinearMap final : public OuterMap {
 public:
  explicit LinearMap(std::vector<double> weights) : w_(std::move(weights)) {
    name = "linear";
    arity = static_cast<int>(w_.size());
    l1_ = 0.0;
    l2_ = 0.0;
    for (double a : w_) {
      l1_ += std::abs(a);
      l2_ += a * a;
    }
    l2_ = std::sqrt(l2_);
  }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (std::size_t j = 0; j < w_.size(); ++j) s += w_[j] * x[j];
    return s;
  }
  void gradient(std::span<const double>, std::span<double> out) const override {
    for (std::size_t j = 0; j < w_.size(); ++j) out[j] = w_[j];
  }
  void hessian(std::span<const double>, std::span<double> out) const override {
    for (auto& v : out) v = 0.0;
  }
  double sup_value() const override { return l1_ > 0.0 ? kInf : 0.0; }
  double sup_grad_norm() const override { return l2_; }
  double sup_hess_norm() const override { return 0.0; }
  double sup_third_norm() const override { return 0.0; }
  double weighted_value_bound() const override { return l1_ * kCubicWeightRatio; }
  double weighted_grad_bound() const override { return l2_; }
  double weighted_grad_bound_m2() const override { return l2_; }
  double weighted_hess_bound() const override { return 0.0; }

 private:
  std::vector<double> w_;
  double l1_ = 0.0, l2_ = 0.0;
};

class SquareMap final : public OuterMap {
 public:
  explicit SquareMap(int m) {
    name = "square";
    arity = m;
  }
  double value(std::span<const double> x) const override {
    double s = 0.0;
    for (double v : x) s += v * v;
    return s;
  }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = 2.0 * x[j];
  }
  void hessian(std::span<const double> x, std::span<double> out) const override {
    const std::size_t m = x.size();
    for (auto& v : out) v = 0.0;
    for (std::size_t j = 0; j < m; ++j) out[j * m + j] = 2.0;
  }
  double sup_value() const override { return kInf; }
  double sup_grad_norm() const override { return kInf; }
  double sup_hess_norm() const override { return 2.0; }
  double sup_third_norm() const override { return 0.0; }
  double weighted_value_bound() const override { return arity * kCubicWeightRatio; }
  // ||2x|| / (1 + max|x|^2) <= 2 sqrt(m) t/(1+t^2) <= sqrt(m)
  double weighted_grad_bound() const override { return std::sqrt(static_cast<double>(arity)); }
  // ||2x|| / (1 + max|x|) <= 2 sqrt(m)
  double weighted_grad_bound_m2() const override {
    return 2.0 * std::sqrt(static_cast<double>(arity));
  }
  double weighted_hess_bound() const override { return 2.0; }
};

class BoundedTanhMap final : public OuterMap {
 public:
  BoundedTanhMap(int m, double scale) : s_(scale) {
    name = "bounded";
    arity = m;
  }
  double value(std::span<const double> x) const override {
    double acc = 0.0;
    for (double v : x) acc += std::tanh(v);
    return s_ * acc;
  }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    for (std::size_t j = 0; j < x.size(); ++j) {
      const double t = std::tanh(x[j]);
      out[j] = s_ * (1.0 - t * t);
    }
  }
  void hessian(std::span<const double> x, std::span<double> out) const override {
    const std::size_t m = x.size();
    for (auto& v : out) v = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const double t = std::tanh(x[j]);
      out[j * m + j] = s_ * (-2.0 * t * (1.0 - t * t));
    }
  }
  double sup_value() const override { return s_ * arity; }
  double sup_grad_norm() const override { return s_ * std::sqrt(static_cast<double>(arity)); }
  double sup_hess_norm() const override { return s_ * kTanhD2Sup; }
  double sup_third_norm() const override { return s_ * kTanhD3Sup; }
  double weighted_value_bound() const override { return sup_value(); }
  double weighted_grad_bound() const override { return sup_grad_norm(); }
  double weighted_grad_bound_m2() const override { return sup_grad_norm(); }
  double weighted_hess_bound() const override { return sup_hess_norm(); }

  static constexpr double kTanhD2Sup = 0.7698003589195011;  // 4/(3 sqrt 3)
  static constexpr double kTanhD3Sup = 2.0;

 private:
  double s_;
};

class SmoothstepMap final : public OuterMap {
 public:
  SmoothstepMap() {
    name = "smoothstep";
    arity = 1;
  }
  double value(std::span<const double> x) const override { return smoothstep_plateau(x[0]); }
  void gradient(std::span<const double> x, std::span<double> out) const override {
    out[0] = smoothstep_plateau_d1(x[0]);
  }
  void hessian(std::span<const double> x, std::span<double> out) const override {
    out[0] = smoothstep_plateau_d2(x[0]);
  }
  double sup_value() const override { return 1.0; }
  double sup_grad_norm() const override { return smoothstep_sup_d1(); }
  double sup_hess_norm() const override { return smoothstep_sup_d2(); }
  double sup_third_norm() const override { return smoothstep_sup_d3(); }
  double weighted_value_bound() const override { return 1.0; }
  double weighted_grad_bound() const override { return smoothstep_sup_d1(); }
  double weighted_grad_bound_m2() const override { return smoothstep_sup_d1(); }
  double weighted_hess_bound() const override { return smoothstep_sup_d2(); }
};

}  // namespace

std::shared_ptr<const OuterMap> make_linear_map(std::vector<double> weights) {
  return std::make_shared<LinearMap>(std::move(weights));
}
std::shared_ptr<const OuterMap> make_square_map(int arity) {
  return std::make_shared<SquareMap>(arity);
}
std::shared_ptr<const OuterMap> make_bounded_map(int arity, double scale) {
  return std::make_shared<BoundedTanhMap>(arity, scale);
}
std::shared_ptr<const OuterMap> make_smoothstep_map() {
  return std::make_shared<SmoothstepMap>();
}

double bounded_map_unit_m1_scale(int arity) {
  const double m = static_cast<double>(arity);
  // M1 layers of scale * sum_j tanh(x_j): value m, gradient m, hessian
  // m * sup|tanh''|, Lipschitz m^{3/2} * sup|tanh'''|.
  const double total = m * (2.0 + BoundedTanhMap::kTanhD2Sup) +
                       std::pow(m, 1.5) * BoundedTanhMap::kTanhD3Sup;
  return 1.0 / total;
}

}  // namespace fclt
