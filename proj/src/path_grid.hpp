#ifndef FCLT_PATH_GRID_HPP
#define FCLT_PATH_GRID_HPP

#include <cstddef>
#include <span>
#include <vector>

namespace fclt {

// Cadlag step path on the uniform grid {q/N : q = 0..N} with values in R^p.
// The path equals values[q] on [q/N, (q+1)/N) and values[N] at t = 1, so
// evaluation is exact for piecewise-constant processes whose jump times lie
// on the grid. Storage is row-major: point q occupies [q*p, (q+1)*p).
class PathGrid {
 public:
  PathGrid() = default;
  PathGrid(std::size_t grid_n, int p)
      : grid_n_(grid_n), p_(p), values_((grid_n + 1) * static_cast<std::size_t>(p), 0.0) {}

  std::size_t grid_n() const noexcept { return grid_n_; }
  int dim() const noexcept { return p_; }

  double* point(std::size_t q) noexcept { return values_.data() + q * p_; }
  const double* point(std::size_t q) const noexcept { return values_.data() + q * p_; }

  double& at(std::size_t q, int k) noexcept { return values_[q * p_ + k]; }
  double at(std::size_t q, int k) const noexcept { return values_[q * p_ + k]; }

  std::span<const double> raw() const noexcept { return values_; }
  std::span<double> raw() noexcept { return values_; }

  // Value at time t in [0,1]; throws std::out_of_range outside.
  void eval(double t, std::span<double> out) const;
  double eval_coord(double t, int k) const;

  // Grid index whose segment covers t (N for t = 1).
  std::size_t segment_index(double t) const;

  // max_q |w(q/N)| in the Euclidean norm; exact for grid-aligned step paths.
  double sup_norm() const noexcept;

  bool all_finite() const noexcept;

  // this <- a*this + b*other (same grid and dimension required).
  void axpby(double a, double b, const PathGrid& other);

 private:
  std::size_t grid_n_ = 0;
  int p_ = 0;
  std::vector<double> values_;
};

}  // namespace fclt

#endif
