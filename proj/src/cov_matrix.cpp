#include "cov_matrix.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fclt {

CovMatrix::CovMatrix(std::size_t p, std::vector<double> entries) : p_(p), a_(std::move(entries)) {
  if (a_.size() != p * p) throw std::invalid_argument("CovMatrix: entries size mismatch");
}

double CovMatrix::frobenius_norm() const noexcept {
  double s = 0.0;
  for (double v : a_) s += v * v;
  return std::sqrt(s);
}

double CovMatrix::trace() const noexcept {
  double s = 0.0;
  for (std::size_t i = 0; i < p_; ++i) s += at(i, i);
  return s;
}

CovMatrix CovMatrix::identity(std::size_t p) {
  CovMatrix m(p);
  for (std::size_t i = 0; i < p; ++i) m.at(i, i) = 1.0;
  return m;
}

EigenDecomposition jacobi_eigen(const CovMatrix& sigma) {
  const std::size_t p = sigma.dim();
  std::vector<double> a = sigma.entries();
  std::vector<double> v(p * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) v[i * p + i] = 1.0;

  const double scale = std::max(sigma.frobenius_norm(), 1.0);
  const double tol = 1e-14 * scale;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = i + 1; j < p; ++j) off += std::abs(a[i * p + j]);
    if (off <= tol) break;

    for (std::size_t q = 0; q + 1 < p; ++q) {
      for (std::size_t r = q + 1; r < p; ++r) {
        const double apq = a[q * p + r];
        if (std::abs(apq) <= tol / static_cast<double>(p * p)) continue;
        const double app = a[q * p + q];
        const double aqq = a[r * p + r];
        const double theta = (aqq - app) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < p; ++k) {
          const double akq = a[k * p + q];
          const double akr = a[k * p + r];
          a[k * p + q] = c * akq - s * akr;
          a[k * p + r] = s * akq + c * akr;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double aqk = a[q * p + k];
          const double ark = a[r * p + k];
          a[q * p + k] = c * aqk - s * ark;
          a[r * p + k] = s * aqk + c * ark;
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vkq = v[k * p + q];
          const double vkr = v[k * p + r];
          v[k * p + q] = c * vkq - s * vkr;
          v[k * p + r] = s * vkq + c * vkr;
        }
      }
    }
  }

  EigenDecomposition dec;
  dec.eigenvalues.resize(p);
  for (std::size_t i = 0; i < p; ++i) dec.eigenvalues[i] = a[i * p + i];
  dec.eigenvectors = std::move(v);
  return dec;
}

CovMatrix sym_sqrt(const CovMatrix& sigma) {
  const std::size_t p = sigma.dim();
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j)
      if (std::abs(sigma.at(i, j) - sigma.at(j, i)) > 1e-12)
        throw std::invalid_argument("asymmetric input");

  EigenDecomposition dec = jacobi_eigen(sigma);
  std::vector<double> root(p);
  for (std::size_t i = 0; i < p; ++i) {
    double lam = dec.eigenvalues[i];
    if (lam < -1e-12) throw std::invalid_argument("not PSD");
    if (lam < 0.0) lam = 0.0;
    root[i] = std::sqrt(lam);
  }

  CovMatrix s(p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i; j < p; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < p; ++k)
        acc += dec.eigenvectors[i * p + k] * root[k] * dec.eigenvectors[j * p + k];
      s.at(i, j) = acc;
      s.at(j, i) = acc;
    }
  }
  return s;
}

}  // namespace fclt
