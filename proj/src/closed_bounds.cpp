#include "closed_bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace fclt {

BoundReport iid_bound(int p, std::uint64_t n, const CovMatrix& sigma,
                      const std::vector<double>& third_abs_moments,
                      const std::vector<double>& second_abs_moments) {
  if (n < 1) throw std::invalid_argument("iid_bound: n must be >= 1");
  if (p < 1 || sigma.dim() != static_cast<std::size_t>(p))
    throw std::invalid_argument("iid_bound: dimension mismatch");
  if (third_abs_moments.size() != static_cast<std::size_t>(p) ||
      second_abs_moments.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("iid_bound: moment vector size mismatch");

  const double pd = static_cast<double>(p);
  const double nd = static_cast<double>(n);
  const double log2 = std::numbers::ln2;
  const double pi = std::numbers::pi;

  double trace = 0.0, diag32 = 0.0, abs_cov = 0.0, third_sum = 0.0, second_sum = 0.0;
  for (int i = 0; i < p; ++i) {
    const double d = sigma.at(static_cast<std::size_t>(i), static_cast<std::size_t>(i));
    trace += d;
    diag32 += std::pow(std::abs(d), 1.5);
    third_sum += third_abs_moments[static_cast<std::size_t>(i)];
    second_sum += second_abs_moments[static_cast<std::size_t>(i)];
  }
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l)
      abs_cov += std::abs(sigma.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)));

  const double root_log2n = std::sqrt(std::log(2.0 * nd));
  const double inv_root_n = 1.0 / std::sqrt(nd);

  // Modulus layer: sqrt(log 2n) [ 6 sqrt(5)/sqrt(2 log 2) sqrt(tr Sigma)
  //                             + 93 sqrt(p)/sqrt(pi log 2) sum |S_ii|^{3/2} ].
  // With Sigma = I this reduces exactly to
  // sqrt(log 2n) [ 6 sqrt(5) sqrt(p)/sqrt(2 log 2) + 93 p^{3/2}/sqrt(pi log 2) ].
  const double modulus =
      inv_root_n * root_log2n *
      (6.0 * std::sqrt(5.0) / std::sqrt(2.0 * log2) * std::sqrt(trace) +
       93.0 * std::sqrt(pd) / std::sqrt(pi * log2) * diag32);

  const double berry_esseen =
      inv_root_n / 6.0 * (std::sqrt(pd) * third_sum + 2.0 * abs_cov * std::sqrt(second_sum));

  const double third_order = inv_root_n / nd * std::pow(std::log(2.0 * nd), 1.5) *
                             std::sqrt(pd) * 2160.0 / (std::sqrt(pi) * std::pow(log2, 1.5)) *
                             diag32;

  BoundReport report;
  report.regime = "iid-local1";
  report.norm_class = NormClass::M;
  report.terms = {
      {"modulus layer", "sqrt-log-layer", modulus, 0.0, true},
      {"berry-esseen layer", "third-moment-layer", berry_esseen, 0.0, true},
      {"higher-order layer", "log32-layer", third_order, 0.0, true},
  };
  report.total = report.term_sum(false);
  return report;
}

BoundReport ustat_bound(std::uint64_t n, double sigma_h2, double sigma_w2, double e_abs_w3,
                        double e_abs_w1) {
  if (n < 1) throw std::invalid_argument("ustat_bound: n must be >= 1");
  if (sigma_w2 <= 0.0) throw std::invalid_argument("degenerate kernel: sigma_w^2 <= 0");
  const double ratio = sigma_h2 / sigma_w2;
  // E[h - w - w]^2 = sigma_h^2 - 2 sigma_w^2 >= 0 holds exactly; estimated
  // inputs may straddle the boundary, so tolerate a 1e-9 relative dip.
  if (ratio < 2.0 - 1e-9)
    throw std::invalid_argument("variance identity violated: sigma_h^2 < 2 sigma_w^2");
  const double excess = std::max(0.0, ratio - 2.0);

  const double nd = static_cast<double>(n);
  const double inv_root_n = 1.0 / std::sqrt(nd);
  const double root_log3n = std::sqrt(std::log(3.0 * nd));
  const double sigma_w = std::sqrt(sigma_w2);

  const double log_coeff = (141.0 + 16.0 * ratio + 12.0 * std::sqrt(excess)) * root_log3n;
  const double constant = 43.0;
  const double berry_esseen =
      (e_abs_w3 + 2.0 * sigma_w2 * e_abs_w1) / (6.0 * sigma_w2 * sigma_w);

  BoundReport report;
  report.regime = "ustat";
  report.norm_class = NormClass::M2;
  report.terms = {
      {"log layer", "sqrt-log-layer", inv_root_n * log_coeff, 0.0, true},
      {"constant layer", "constant-layer", inv_root_n * constant, 0.0, true},
      {"projection berry-esseen", "be-layer", inv_root_n * berry_esseen, 0.0, true},
  };
  report.total = report.term_sum(false);
  return report;
}

}  // namespace fclt
