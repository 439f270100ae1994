#include "bump_functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "cylinder_functional.hpp"

namespace fclt {

BumpFunctional::BumpFunctional(PathGrid center, Params params)
    : center_(std::move(center)), params_(params) {
  if (!(params_.gamma > 0.0)) throw std::invalid_argument("bump: gamma must be > 0");
  if (!(params_.eps > 0.0 && params_.eps <= 1.0))
    throw std::invalid_argument("bump: eps must be in (0,1]");
  if (!(params_.pn >= 4.0)) throw std::invalid_argument("bump: p_n must be >= 4");
  if (!(params_.eta > 0.0 && params_.eta <= 1.0))
    throw std::invalid_argument("bump: eta must be in (0,1]");
  if (params_.variant == Variant::starred) {
    if (!(params_.theta > 0.0 && params_.theta < 1.0))
      throw std::invalid_argument("bump: theta must be in (0,1)");
    if (!(params_.delta > 0.0) || !(params_.rn > 0.0))
      throw std::invalid_argument("bump: delta and r_n must be > 0");
  }
}

double BumpFunctional::inner_norm(const PathGrid& w) const {
  if (w.dim() != center_.dim()) throw std::invalid_argument("bump: dimension mismatch");
  const int p = w.dim();
  const double floor2 = params_.eps * params_.gamma * params_.eps * params_.gamma;

  // Merged-grid walk; segment boundaries compared exactly as rationals.
  const std::size_t nw = w.grid_n();
  const std::size_t ns = center_.grid_n();
  if (nw == 0 || ns == 0) throw std::invalid_argument("bump: empty grid");
  std::size_t qw = 0, qs = 0;
  double t = 0.0;
  std::vector<double> logs;
  std::vector<double> lens;
  logs.reserve(nw + ns);
  lens.reserve(nw + ns);
  while (t < 1.0) {
    const double next_w = static_cast<double>(qw + 1) / static_cast<double>(nw);
    const double next_s = static_cast<double>(qs + 1) / static_cast<double>(ns);
    // compare (qw+1)/nw vs (qs+1)/ns via cross-multiplication
    const unsigned long long lhs = static_cast<unsigned long long>(qw + 1) * ns;
    const unsigned long long rhs = static_cast<unsigned long long>(qs + 1) * nw;
    double next;
    if (lhs == rhs) {
      next = next_w;
    } else if (lhs < rhs) {
      next = next_w;
    } else {
      next = next_s;
    }
    const double* vw = w.point(qw);
    const double* vs = center_.point(qs);
    double dist2 = floor2;
    for (int k = 0; k < p; ++k) {
      const double d = vw[k] - vs[k];
      dist2 += d * d;
    }
    logs.push_back(0.5 * std::log(dist2));
    lens.push_back(next - t);
    t = next;
    if (lhs <= rhs) ++qw;
    if (lhs >= rhs) ++qs;
  }

  // ||F||_{p_n} = exp(M + log(sum exp(pn (logF - M)) len) / pn).
  const double m = *std::max_element(logs.begin(), logs.end());
  double acc = 0.0;
  for (std::size_t i = 0; i < logs.size(); ++i)
    acc += std::exp(params_.pn * (logs[i] - m)) * lens[i];
  return std::exp(m + std::log(acc) / params_.pn);
}

double BumpFunctional::eval(const PathGrid& w) const {
  const double val = inner_norm(w);
  double threshold;
  if (params_.variant == Variant::plain) {
    threshold = params_.gamma * std::sqrt(1.0 + params_.eps * params_.eps);
    return smoothstep_plateau((val - threshold) / params_.eta);
  }
  const double shrink =
      std::pow(std::min(params_.delta, params_.rn / 2.0), 1.0 / params_.pn);
  threshold = params_.gamma *
              std::sqrt(params_.eps * params_.eps + (1.0 - params_.theta) * (1.0 - params_.theta)) *
              shrink;
  return smoothstep_plateau((val - threshold + params_.eta) / params_.eta);
}

double BumpFunctional::inner_first_bound() const { return 1.0 / params_.eta; }

double BumpFunctional::inner_second_bound() const {
  return 2.0 * (params_.pn - 1.0) / (params_.eta * params_.eps * params_.gamma);
}

double BumpFunctional::inner_third_bound() const {
  const double eg = params_.eps * params_.gamma;
  return 15.0 * params_.pn * params_.pn / (eg * eg * params_.eta);
}

double BumpFunctional::first_layer_bound() const {
  return smoothstep_sup_d1() / params_.eta;
}

double BumpFunctional::second_layer_bound() const {
  const double eta = params_.eta;
  const double f2 = 2.0 * (params_.pn - 1.0) / (params_.eps * params_.gamma);
  return smoothstep_sup_d2() / (eta * eta) + smoothstep_sup_d1() * f2 / eta;
}

double BumpFunctional::third_layer_bound() const {
  const double eta = params_.eta;
  const double eg = params_.eps * params_.gamma;
  const double f2 = 2.0 * (params_.pn - 1.0) / eg;
  const double f3 = 15.0 * params_.pn * params_.pn / (eg * eg);
  return smoothstep_sup_d3() / (eta * eta * eta) +
         3.0 * smoothstep_sup_d2() * f2 / (eta * eta) + smoothstep_sup_d1() * f3 / eta;
}

std::optional<double> BumpFunctional::norm_bound(NormClass) const {
  // sup|phi| + the three chain-rule layers bounds every class at once,
  // since the M0 components dominate the weighted ones.
  return 1.0 + first_layer_bound() + second_layer_bound() + third_layer_bound();
}

std::optional<double> BumpFunctional::first_derivative_weight_bound() const {
  return first_layer_bound();
}

std::optional<double> BumpFunctional::indicator_direction_bound(int, std::size_t lambda) const {
  // |Df(w)[h]| <= ||h||_{p_n} / eta and the window has length <= 1/lambda.
  return smoothstep_sup_d1() / params_.eta *
         std::pow(1.0 / static_cast<double>(lambda), 1.0 / params_.pn);
}

}  // namespace fclt
