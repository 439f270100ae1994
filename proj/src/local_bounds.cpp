#include "local_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "gaussian_paths.hpp"

namespace fclt {

namespace {

struct PairSets {
  std::size_t i = 0;
  std::size_t j = 0;
  std::vector<std::size_t> extension;  // A_j setminus A_i (feeds eps2)
  std::vector<std::size_t> united;     // A_i union A_j   (feeds eps3)
};

std::vector<PairSets> build_pairs(const DependencyModel& model) {
  std::vector<PairSets> pairs;
  const std::size_t rows = model.rows();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j : model.neighborhoods[i]) {
      PairSets ps;
      ps.i = i;
      ps.j = j;
      const auto& ai = model.neighborhoods[i];
      const auto& aj = model.neighborhoods[j];
      for (std::size_t r : aj)
        if (std::find(ai.begin(), ai.end(), r) == ai.end()) ps.extension.push_back(r);
      ps.united = ai;
      for (std::size_t r : aj)
        if (std::find(ai.begin(), ai.end(), r) == ai.end()) ps.united.push_back(r);
      pairs.push_back(std::move(ps));
    }
  }
  return pairs;
}

// Shared engine: the MC integrands of the first three terms are identical in
// both regimes once the row caps and jump norms are fixed.
struct FirstThreeTerms {
  double eps1 = 0.0, eps1_se = 0.0;
  double eps2 = 0.0, eps2_se = 0.0;
  double eps3 = 0.0, eps3_se = 0.0;
  bool eps2_structural_zero = false;
};

FirstThreeTerms mc_first_three(const DependencyModel& model, const MomentOracle& oracle,
                               std::uint64_t budget, std::uint64_t seed) {
  const std::size_t rows = model.rows();
  const int p = model.p;
  const std::vector<PairSets> pairs = build_pairs(model);
  const std::size_t npairs = pairs.size();

  bool eps2_zero = true;
  for (const auto& ps : pairs)
    if (!ps.extension.empty()) eps2_zero = false;

  std::vector<std::size_t> caps(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) caps[static_cast<std::size_t>(k)] = model.row_cap(k);

  auto jn = [&model](std::size_t i, int k) { return model.jump_sup_norm(i, k); };

  const std::size_t pp = static_cast<std::size_t>(p) * static_cast<std::size_t>(p);
  // slots: [0] eps1 raw; [1] eps2 raw; [2 .. 2+npairs) V_ij; then A_ijkl.
  BatchedExpectation job;
  job.slots = 2 + npairs + npairs * pp;
  job.outputs = 3;
  job.accumulate = [&, p, rows](std::span<const double> x, std::span<double> sums) {
    auto cell = [&x, p](std::size_t i, int k) {
      return x[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)];
    };
    // eps1: sum_i sqrt(sum_k X_ik^2 ||J||^2 1) * sum_l S_il^2
    double e1 = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double self2 = 0.0;
      for (int k = 0; k < p; ++k) {
        if (i >= caps[static_cast<std::size_t>(k)]) continue;
        const double v = cell(i, k) * jn(i, k);
        self2 += v * v;
      }
      if (self2 == 0.0) continue;
      double s2sum = 0.0;
      for (int l = 0; l < p; ++l) {
        double s = 0.0;
        for (std::size_t j : model.neighborhoods[i])
          if (j < caps[static_cast<std::size_t>(l)]) s += cell(j, l) * jn(j, l);
        s2sum += s * s;
      }
      e1 += std::sqrt(self2) * s2sum;
    }
    sums[0] += e1;

    // u_i = sum_k |X_ik| ||J_ik|| 1[i < lambda_k cap]
    std::vector<double> u(rows, 0.0);
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (int k = 0; k < p; ++k)
        if (i < caps[static_cast<std::size_t>(k)]) acc += std::abs(cell(i, k)) * jn(i, k);
      u[i] = acc;
    }

    double e2 = 0.0;
    for (std::size_t pi = 0; pi < npairs; ++pi) {
      const auto& ps = pairs[pi];
      // ||T||_2 over the extension set
      double t2 = 0.0;
      if (!ps.extension.empty()) {
        for (int m = 0; m < p; ++m) {
          double t = 0.0;
          for (std::size_t r : ps.extension)
            if (r < caps[static_cast<std::size_t>(m)]) t += cell(r, m) * jn(r, m);
          t2 += t * t;
        }
        e2 += u[ps.i] * u[ps.j] * std::sqrt(t2);
      }
      // V_ij over the union set
      double v2 = 0.0;
      for (int m = 0; m < p; ++m) {
        double t = 0.0;
        for (std::size_t r : ps.united)
          if (r < caps[static_cast<std::size_t>(m)]) t += cell(r, m) * jn(r, m);
        v2 += t * t;
      }
      sums[2 + pi] += std::sqrt(v2);
      double* a = sums.data() + 2 + npairs + pi * pp;
      for (int k = 0; k < p; ++k) {
        const double xi = cell(ps.i, k);
        for (int l = 0; l < p; ++l)
          a[static_cast<std::size_t>(k) * static_cast<std::size_t>(p) +
            static_cast<std::size_t>(l)] += std::abs(xi * cell(ps.j, l));
      }
    }
    sums[1] += e2;
  };
  job.finalize = [&, p](std::span<const double> means, std::span<double> out) {
    out[0] = means[0] / 6.0;
    out[1] = means[1] / 3.0;
    double e3 = 0.0;
    for (std::size_t pi = 0; pi < npairs; ++pi) {
      const auto& ps = pairs[pi];
      const double v = means[2 + pi];
      const double* a = means.data() + 2 + npairs + pi * pp;
      for (int k = 0; k < p; ++k) {
        if (ps.i >= caps[static_cast<std::size_t>(k)]) continue;
        for (int l = 0; l < p; ++l) {
          if (ps.j >= caps[static_cast<std::size_t>(l)]) continue;
          e3 += a[static_cast<std::size_t>(k) * static_cast<std::size_t>(p) +
                  static_cast<std::size_t>(l)] *
                jn(ps.i, k) * jn(ps.j, l) * v;
        }
      }
    }
    out[2] = e3 / 3.0;
  };

  const std::vector<McEstimate> est = batched_expectations(oracle, job, budget, seed);
  FirstThreeTerms t;
  t.eps1 = est[0].mean;
  t.eps1_se = est[0].se;
  t.eps2 = eps2_zero ? 0.0 : est[1].mean;
  t.eps2_se = eps2_zero ? 0.0 : est[1].se;
  t.eps2_structural_zero = eps2_zero;
  t.eps3 = est[2].mean;
  t.eps3_se = est[2].se;
  return t;
}

double block_cov_sum(const MomentOracle& oracle, std::size_t block_a, std::size_t lam_a, int k,
                     std::size_t block_b, std::size_t lam_b, int l) {
  const long range = oracle.dependence_range();
  const std::size_t a0 = block_a * lam_a, a1 = a0 + lam_a;
  const std::size_t b0 = block_b * lam_b, b1 = b0 + lam_b;
  double acc = 0.0;
  for (std::size_t j1 = a0; j1 < a1; ++j1) {
    std::size_t lo = b0, hi = b1;
    if (range >= 0) {
      const std::size_t r = static_cast<std::size_t>(range);
      lo = std::max(b0, j1 >= r ? j1 - r : 0);
      hi = std::min(b1, j1 + r + 1);
    }
    for (std::size_t j2 = lo; j2 < hi; ++j2) acc += oracle.second_moment(j1, k, j2, l);
  }
  return acc;
}

}  // namespace

BoundReport eps_terms(const DependencyModel& model, const MomentOracle& oracle,
                      const CovMatrix& sigma, std::uint64_t budget, std::uint64_t seed) {
  require_valid(model);
  if (model.regime != DependencyModel::Regime::local3)
    throw std::invalid_argument("eps_terms: model must be in the local3 regime");
  if (sigma.dim() != static_cast<std::size_t>(model.p))
    throw std::invalid_argument("eps_terms: sigma dimension mismatch");

  const int p = model.p;
  const FirstThreeTerms mc = mc_first_three(model, oracle, budget, seed);

  // eps4: per-row covariance mismatch against Sigma_{k,l}/sqrt(lam_k lam_l).
  double e4 = 0.0;
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) {
      const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
      const std::size_t lam_l = model.lambdas[static_cast<std::size_t>(l)];
      const double target = sigma.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) /
                            std::sqrt(static_cast<double>(lam_k) * static_cast<double>(lam_l));
      const std::size_t cap = std::min(lam_k, lam_l);
      for (std::size_t i = 0; i < cap; ++i)
        e4 += std::abs(target - oracle.second_moment(i, k, i, l));
    }
  }
  e4 *= 0.5;

  // eps5: off-diagonal neighborhood covariances; the outer row range is
  // lambda_k alone, exactly as displayed.
  double e5 = 0.0;
  for (int k = 0; k < p; ++k) {
    const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < lam_k; ++i) {
      for (std::size_t j : model.neighborhoods[i]) {
        if (j == i) continue;
        for (int l = 0; l < p; ++l) e5 += std::abs(oracle.second_moment(i, k, j, l));
      }
    }
  }
  e5 *= 0.5;

  const double e6 = modulus_bound(model.lambdas, sigma);

  double e7 = 0.0;
  for (int k = 0; k < p; ++k) {
    const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
    for (std::size_t i = 0; i < lam_k; ++i) {
      const double dev = model.jump_indicator_dev(i, k);
      if (dev != 0.0) e7 += std::sqrt(oracle.second_moment(i, k, i, k)) * dev;
    }
  }

  bool independent = true;
  for (std::size_t i = 0; i < model.rows() && independent; ++i)
    independent = model.neighborhoods[i].size() == 1 && model.neighborhoods[i][0] == i;

  BoundReport report;
  report.regime = independent ? "local3-independent" : "local3";
  report.norm_class = NormClass::M1;
  report.terms = {
      {"third-moment cluster", "eps1", mc.eps1, mc.eps1_se, true},
      {"dependence overlap", "eps2", mc.eps2, mc.eps2_se, true},
      {"split expectation", "eps3", mc.eps3, mc.eps3_se, true},
      {"variance mismatch", "eps4", e4, 0.0, true},
      {"neighbor covariance", "eps5", e5, 0.0, true},
      {"brownian modulus", "eps6", e6, 0.0, true},
      {"jump deviation", "eps7", e7, 0.0, true},
  };
  report.total = report.term_sum(false);
  return report;
}

BoundReport delta_terms(const DependencyModel& model, const MomentOracle& oracle,
                        const CovMatrix& sigma, const FunctionalSpec& g, std::uint64_t budget,
                        std::uint64_t seed) {
  require_valid(model);
  if (model.regime != DependencyModel::Regime::proposition_weak)
    throw std::invalid_argument("delta_terms: model must be in the proposition-weak regime");
  if (!model.indicator_jumps())
    throw std::invalid_argument("delta_terms: the n^2 regime uses indicator jumps only");
  if (sigma.dim() != static_cast<std::size_t>(model.p))
    throw std::invalid_argument("delta_terms: sigma dimension mismatch");

  const int p = model.p;
  const FirstThreeTerms mc = mc_first_three(model, oracle, budget, seed);

  // delta4: grouped-block covariance against Sigma_{k,l}/sqrt(lam_k lam_l).
  double d4 = 0.0;
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) {
      const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
      const std::size_t lam_l = model.lambdas[static_cast<std::size_t>(l)];
      const double target = sigma.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) /
                            std::sqrt(static_cast<double>(lam_k) * static_cast<double>(lam_l));
      const std::size_t cap = std::min(lam_k, lam_l);
      for (std::size_t i = 0; i < cap; ++i)
        d4 += std::abs(target - block_cov_sum(oracle, i, lam_k, k, i, lam_l, l));
    }
  }
  d4 *= 0.5;

  // delta5: distinct grouped blocks.
  const long range = oracle.dependence_range();
  double d5 = 0.0;
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) {
      const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
      const std::size_t lam_l = model.lambdas[static_cast<std::size_t>(l)];
      for (std::size_t i1 = 0; i1 < lam_k; ++i1) {
        for (std::size_t i2 = 0; i2 < lam_l; ++i2) {
          if (i2 == i1) continue;
          if (range >= 0) {
            // Skip block pairs whose index ranges sit beyond the range.
            const std::size_t a0 = i1 * lam_k, a1 = a0 + lam_k - 1;
            const std::size_t b0 = i2 * lam_l, b1 = b0 + lam_l - 1;
            const std::size_t gap = a1 < b0 ? b0 - a1 : (b1 < a0 ? a0 - b1 : 0);
            if (gap > static_cast<std::size_t>(range)) continue;
          }
          d5 += std::abs(block_cov_sum(oracle, i1, lam_k, k, i2, lam_l, l));
        }
      }
    }
  }
  d5 *= 0.5;

  const double d6 = modulus_bound(model.lambdas, sigma);

  // delta7: certified window-direction bound times the rms of the full
  // coordinate sums.
  double d7 = 0.0;
  for (int k = 0; k < p; ++k) {
    const std::size_t lam_k = model.lambdas[static_cast<std::size_t>(k)];
    const auto dir = g.indicator_direction_bound(k, lam_k);
    if (!dir.has_value())
      throw std::invalid_argument("functional lacks direction bound (needed for delta7)");
    const std::size_t cap = lam_k * lam_k;
    double var = 0.0;
    for (std::size_t i = 0; i < cap; ++i) {
      std::size_t lo = 0, hi = cap;
      if (range >= 0) {
        const std::size_t r = static_cast<std::size_t>(range);
        lo = i >= r ? i - r : 0;
        hi = std::min(cap, i + r + 1);
      }
      for (std::size_t j = lo; j < hi; ++j) var += oracle.second_moment(i, k, j, k);
    }
    d7 += *dir * std::sqrt(std::max(0.0, var));
  }

  BoundReport report;
  report.regime = "proposition-weak";
  report.norm_class = NormClass::M1;
  report.terms = {
      {"third-moment cluster", "delta1", mc.eps1, mc.eps1_se, true},
      {"dependence overlap", "delta2", mc.eps2, mc.eps2_se, true},
      {"split expectation", "delta3", mc.eps3, mc.eps3_se, true},
      {"block variance mismatch", "delta4", d4, 0.0, true},
      {"block cross covariance", "delta5", d5, 0.0, true},
      {"brownian modulus", "delta6", d6, 0.0, true},
      {"window direction", "delta7", d7, 0.0, false},
  };
  report.total = report.term_sum(false);
  return report;
}

}  // namespace fclt
