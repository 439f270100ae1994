#include "ustat_model.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace fclt {

namespace {

const double kAbsMoment1 = std::sqrt(2.0 / std::numbers::pi);        // E|N(0,1)|
const double kAbsMoment3 = 2.0 * std::sqrt(2.0 / std::numbers::pi);  // E|N(0,1)|^3

}  // namespace

UStatModel UStatModel::from_catalog(const std::string& name, std::uint64_t n) {
  UStatModel m;
  m.kernel_name = name;
  m.n = n;
  if (n < 2) throw std::invalid_argument("ustat: n must be >= 2");
  if (name == "sum") {
    m.h = [](double x, double y) { return x + y; };
    m.w = [](double x) { return x; };
    m.has_analytic_moments = true;
    m.sigma_w2 = 1.0;
    m.sigma_h2 = 2.0;
    m.e_abs_w1 = kAbsMoment1;
    m.e_abs_w3 = kAbsMoment3;
  } else if (name == "product") {
    m.h = [](double x, double y) { return x * y; };
    m.w = [](double) { return 0.0; };
    m.has_analytic_moments = true;
    m.sigma_w2 = 0.0;
    m.sigma_h2 = 1.0;
    m.e_abs_w1 = 0.0;
    m.e_abs_w3 = 0.0;
  } else if (name == "sum-plus-product") {
    m.h = [](double x, double y) { return x + y + x * y; };
    m.w = [](double x) { return x; };
    m.has_analytic_moments = true;
    m.sigma_w2 = 1.0;
    m.sigma_h2 = 3.0;
    m.e_abs_w1 = kAbsMoment1;
    m.e_abs_w3 = kAbsMoment3;
  } else {
    throw std::invalid_argument("ustat: unknown kernel '" + name + "'");
  }
  return m;
}

UStatProjection ustat_projection(const UStatModel& model, std::uint64_t budget,
                                 std::uint64_t seed) {
  UStatProjection proj;
  if (model.has_analytic_moments) {
    proj.sigma_w2 = {model.sigma_w2, 0.0, 0, seed};
    proj.sigma_h2 = {model.sigma_h2, 0.0, 0, seed};
    proj.e_abs_w1 = {model.e_abs_w1, 0.0, 0, seed};
    proj.e_abs_w3 = {model.e_abs_w3, 0.0, 0, seed};
  } else {
    if (budget < 1000) throw std::invalid_argument("ustat_projection: budget must be >= 1000");
    RngStream rng(seed, 7);
    const std::uint64_t inner = std::max<std::uint64_t>(256, budget / 64);
    auto w_mc = [&](double x, RngStream& r) {
      double acc = 0.0;
      for (std::uint64_t b = 0; b < inner; ++b) acc += model.h(r.next_gaussian(), x);
      return acc / static_cast<double>(inner);
    };
    double sw = 0.0, sw2 = 0.0, sh = 0.0, sh2 = 0.0, a1 = 0.0, a1sq = 0.0, a3 = 0.0, a3sq = 0.0;
    for (std::uint64_t s = 0; s < budget; ++s) {
      const double x = rng.next_gaussian();
      const double y = rng.next_gaussian();
      const double wx = model.w ? model.w(x) : w_mc(x, rng);
      const double hv = model.h(x, y);
      sw += wx * wx;
      sw2 += wx * wx * wx * wx;
      sh += hv * hv;
      sh2 += hv * hv * hv * hv;
      a1 += std::abs(wx);
      a1sq += wx * wx;
      const double w3 = std::abs(wx * wx * wx);
      a3 += w3;
      a3sq += w3 * w3;
    }
    const double nd = static_cast<double>(budget);
    auto finish = [nd, seed, budget](double sum, double sumsq) {
      McEstimate e;
      e.mean = sum / nd;
      const double var = std::max(0.0, (sumsq - nd * e.mean * e.mean) / (nd - 1.0));
      e.se = std::sqrt(var / nd);
      e.samples = budget;
      e.seed = seed;
      return e;
    };
    proj.sigma_w2 = finish(sw, sw2);
    proj.sigma_h2 = finish(sh, sh2);
    proj.e_abs_w1 = finish(a1, a1sq);
    proj.e_abs_w3 = finish(a3, a3sq);
  }
  if (proj.sigma_w2.mean <= 3.0 * proj.sigma_w2.se)
    throw std::invalid_argument("degenerate kernel: Var(w(X_1)) is zero within noise");
  return proj;
}

UStatPaths ustat_paths(const UStatModel& model, RngStream& rng, int refinement) {
  if (!model.w) throw std::invalid_argument("ustat_paths: analytic projection required");
  if (model.sigma_w2 <= 0.0) throw std::invalid_argument("degenerate kernel: sigma_w^2 <= 0");
  const std::uint64_t n = model.n;
  const double sigma_w = std::sqrt(model.sigma_w2);

  std::vector<double> x(n);
  for (double& v : x) v = rng.next_gaussian();

  // S_h(l) and S_w(l) accumulate pair sums in the identical order, so a
  // kernel with h = w + w gives bitwise-equal paths.
  std::vector<double> level_h(n + 1, 0.0), level_w(n + 1, 0.0);
  double sh = 0.0, sw = 0.0;
  for (std::uint64_t l = 1; l <= n; ++l) {
    const double xl = x[l - 1];
    const double wl = model.w(xl);
    for (std::uint64_t i = 0; i + 1 < l; ++i) {
      sh += model.h(x[i], xl);
      sw += model.w(x[i]) + wl;
    }
    const double t = static_cast<double>(l) / static_cast<double>(n);
    const double scale = std::pow(static_cast<double>(n), -1.5) / (sigma_w * t);
    level_h[l] = l >= 2 ? scale * sh : 0.0;
    level_w[l] = l >= 2 ? scale * sw : 0.0;
  }

  const std::size_t grid_n = static_cast<std::size_t>(refinement) * n;
  UStatPaths out{PathGrid(grid_n, 1), PathGrid(grid_n, 1)};
  for (std::size_t q = 1; q <= grid_n; ++q) {
    const std::size_t l = q / static_cast<std::size_t>(refinement);
    out.y.at(q, 0) = level_h[l];
    out.y_tilde.at(q, 0) = level_w[l];
  }
  return out;
}

double ustat_coupling_sup(const UStatPaths& paths) {
  double best = 0.0;
  for (std::size_t q = 0; q <= paths.y.grid_n(); ++q) {
    const double d = std::abs(paths.y.at(q, 0) - paths.y_tilde.at(q, 0));
    if (d > best) best = d;
  }
  return best;
}

}  // namespace fclt
