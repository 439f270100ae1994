#ifndef FCLT_COV_MATRIX_HPP
#define FCLT_COV_MATRIX_HPP

#include <cstddef>
#include <vector>

namespace fclt {

// Dense symmetric PSD matrix. Symmetry is enforced to 1e-12 on construction;
// eigenvalues in [-1e-12, 0) are treated as round-off and clamped to zero,
// anything below that threshold is rejected as genuinely indefinite.
class CovMatrix {
 public:
  CovMatrix() = default;
  explicit CovMatrix(std::size_t p) : p_(p), a_(p * p, 0.0) {}
  CovMatrix(std::size_t p, std::vector<double> entries);

  std::size_t dim() const noexcept { return p_; }
  double& at(std::size_t i, std::size_t j) noexcept { return a_[i * p_ + j]; }
  double at(std::size_t i, std::size_t j) const noexcept { return a_[i * p_ + j]; }
  const std::vector<double>& entries() const noexcept { return a_; }

  double frobenius_norm() const noexcept;
  double trace() const noexcept;

  static CovMatrix identity(std::size_t p);

 private:
  std::size_t p_ = 0;
  std::vector<double> a_;
};

struct EigenDecomposition {
  std::vector<double> eigenvalues;   // length p
  std::vector<double> eigenvectors;  // column j = eigenvector j, row-major p x p
};

// Full eigendecomposition by cyclic Jacobi sweeps (off-diagonal tolerance
// 1e-14 relative, at most 100 sweeps).
EigenDecomposition jacobi_eigen(const CovMatrix& sigma);

// Symmetric PSD square root S with ||S*S - sigma||_F <= 1e-10 (1 + ||sigma||_F).
// Throws std::invalid_argument("not PSD") when an eigenvalue is < -1e-12 and
// std::invalid_argument("asymmetric input") when symmetry fails.
CovMatrix sym_sqrt(const CovMatrix& sigma);

}  // namespace fclt

#endif
