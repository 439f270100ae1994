#include "lr_functional.hpp"

#include <cmath>
#include <stdexcept>

namespace fclt {

LrNormFunctional::LrNormFunctional(double r) : r_(r) {
  if (!(r >= 2.0)) throw std::invalid_argument("LrNormFunctional: r must be >= 2");
}

double LrNormFunctional::eval(const PathGrid& w) const {
  const std::size_t n = w.grid_n();
  const int p = w.dim();
  const double dt = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (std::size_t q = 0; q < n; ++q) {
    const double* v = w.point(q);
    double s = 0.0;
    for (int k = 0; k < p; ++k) s += v[k] * v[k];
    acc += std::pow(std::sqrt(s), r_) * dt;
  }
  return std::pow(acc, 1.0 / r_);
}

std::optional<double> LrNormFunctional::indicator_direction_bound(int, std::size_t lambda) const {
  if (lambda < 1) throw std::invalid_argument("indicator_direction_bound: lambda must be >= 1");
  return std::pow(1.0 / static_cast<double>(lambda), 1.0 / r_);
}

}  // namespace fclt
