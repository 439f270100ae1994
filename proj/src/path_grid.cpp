#include "path_grid.hpp"

#include <cmath>
#include <stdexcept>

namespace fclt {

std::size_t PathGrid::segment_index(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("path_eval: t outside [0,1]");
  if (t >= 1.0) return grid_n_;
  auto q = static_cast<std::size_t>(std::floor(t * static_cast<double>(grid_n_)));
  if (q >= grid_n_) q = grid_n_ - 1;  // guards t*N rounding up to N for t < 1
  return q;
}

void PathGrid::eval(double t, std::span<double> out) const {
  const std::size_t q = segment_index(t);
  const double* src = point(q);
  for (int k = 0; k < p_; ++k) out[k] = src[k];
}

double PathGrid::eval_coord(double t, int k) const {
  return point(segment_index(t))[k];
}

double PathGrid::sup_norm() const noexcept {
  double best = 0.0;
  for (std::size_t q = 0; q <= grid_n_; ++q) {
    const double* v = point(q);
    double s = 0.0;
    for (int k = 0; k < p_; ++k) s += v[k] * v[k];
    if (s > best) best = s;
  }
  return std::sqrt(best);
}

bool PathGrid::all_finite() const noexcept {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

void PathGrid::axpby(double a, double b, const PathGrid& other) {
  if (other.grid_n_ != grid_n_ || other.p_ != p_)
    throw std::invalid_argument("axpby: grid mismatch");
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] = a * values_[i] + b * other.values_[i];
}

}  // namespace fclt
