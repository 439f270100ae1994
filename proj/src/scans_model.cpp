#include "scans_model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gaussian_paths.hpp"

namespace fclt {

void ScansModel::validate() const {
  if (p < 1) throw std::invalid_argument("scans: p must be >= 1");
  if (m < 1) throw std::invalid_argument("scans: m must be >= 1");
  if (n <= static_cast<std::uint64_t>(m)) throw std::invalid_argument("scans: requires n > m");
  if (thresholds.size() != static_cast<std::size_t>(p))
    throw std::invalid_argument("scans: thresholds size mismatch");
  if (atoms.empty() || atoms.size() != probs.size())
    throw std::invalid_argument("scans: atoms/probs size mismatch");
  double total = 0.0;
  for (double q : probs) {
    if (q < 0.0) throw std::invalid_argument("scans: negative probability");
    total += q;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw std::invalid_argument("scans: probabilities must sum to 1");
  for (const auto& a : atoms)
    if (a.size() != static_cast<std::size_t>(p))
      throw std::invalid_argument("scans: atom dimension mismatch");
}

namespace {

// Odometer walk over `width` innovation slots; calls visit(indices, weight).
template <typename Visit>
void enumerate_states(const ScansModel& model, int width, Visit&& visit) {
  const std::size_t s = model.atoms.size();
  double states = 1.0;
  for (int i = 0; i < width; ++i) states *= static_cast<double>(s);
  if (states > static_cast<double>(kScansStateCap))
    throw std::invalid_argument("state explosion: discrete enumeration exceeds the cap");
  std::vector<std::size_t> idx(static_cast<std::size_t>(width), 0);
  for (;;) {
    double w = 1.0;
    for (int i = 0; i < width; ++i) w *= model.probs[idx[static_cast<std::size_t>(i)]];
    visit(idx, w);
    int pos = 0;
    while (pos < width) {
      if (++idx[static_cast<std::size_t>(pos)] < s) break;
      idx[static_cast<std::size_t>(pos)] = 0;
      ++pos;
    }
    if (pos == width) break;
  }
}

std::size_t sample_atom(const ScansModel& model, RngStream& rng) {
  const double u = rng.next_uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < model.probs.size(); ++i) {
    acc += model.probs[i];
    if (u < acc) return i;
  }
  return model.probs.size() - 1;
}

}  // namespace

std::vector<double> scans_pi(const ScansModel& model) {
  model.validate();
  const int p = model.p;
  std::vector<double> pi(static_cast<std::size_t>(p), 0.0);
  enumerate_states(model, model.m, [&](const std::vector<std::size_t>& idx, double w) {
    for (int k = 0; k < p; ++k) {
      double r = 0.0;
      for (int l = 0; l < model.m; ++l)
        r += model.atoms[idx[static_cast<std::size_t>(l)]][static_cast<std::size_t>(k)];
      if (r <= model.thresholds[static_cast<std::size_t>(k)]) pi[static_cast<std::size_t>(k)] += w;
    }
  });
  return pi;
}

std::vector<double> scans_psi(const ScansModel& model, int lag) {
  model.validate();
  if (lag < 0) throw std::invalid_argument("scans_psi: lag must be >= 0");
  const int p = model.p;
  if (lag >= model.m) {
    // Disjoint windows: the joint factorizes and psi vanishes identically.
    return std::vector<double>(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0.0);
  }
  const std::vector<double> pi = scans_pi(model);
  std::vector<double> joint(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0.0);
  // R_{lag+1} spans slots lag..lag+m-1; R_1 spans slots 0..m-1.
  enumerate_states(model, model.m + lag, [&](const std::vector<std::size_t>& idx, double w) {
    for (int k = 0; k < p; ++k) {
      double r_late = 0.0;
      for (int l = 0; l < model.m; ++l)
        r_late += model.atoms[idx[static_cast<std::size_t>(lag + l)]][static_cast<std::size_t>(k)];
      if (r_late > model.thresholds[static_cast<std::size_t>(k)]) continue;
      for (int l2 = 0; l2 < p; ++l2) {
        double r_early = 0.0;
        for (int l = 0; l < model.m; ++l)
          r_early += model.atoms[idx[static_cast<std::size_t>(l)]][static_cast<std::size_t>(l2)];
        if (r_early <= model.thresholds[static_cast<std::size_t>(l2)])
          joint[static_cast<std::size_t>(k) * static_cast<std::size_t>(p) +
                static_cast<std::size_t>(l2)] += w;
      }
    }
  });
  for (int k = 0; k < p; ++k)
    for (int l = 0; l < p; ++l)
      joint[static_cast<std::size_t>(k) * static_cast<std::size_t>(p) +
            static_cast<std::size_t>(l)] -=
          pi[static_cast<std::size_t>(k)] * pi[static_cast<std::size_t>(l)];
  return joint;
}

std::vector<McEstimate> scans_pi_mc(const ScansModel& model, std::uint64_t budget,
                                    std::uint64_t seed) {
  model.validate();
  const int p = model.p;
  std::vector<McEstimate> out(static_cast<std::size_t>(p));
  RngStream rng(seed, 0);
  std::vector<double> hits(static_cast<std::size_t>(p), 0.0);
  for (std::uint64_t s = 0; s < budget; ++s) {
    std::vector<double> r(static_cast<std::size_t>(p), 0.0);
    for (int l = 0; l < model.m; ++l) {
      const std::size_t a = sample_atom(model, rng);
      for (int k = 0; k < p; ++k)
        r[static_cast<std::size_t>(k)] += model.atoms[a][static_cast<std::size_t>(k)];
    }
    for (int k = 0; k < p; ++k)
      if (r[static_cast<std::size_t>(k)] <= model.thresholds[static_cast<std::size_t>(k)])
        hits[static_cast<std::size_t>(k)] += 1.0;
  }
  for (int k = 0; k < p; ++k) {
    const double mean = hits[static_cast<std::size_t>(k)] / static_cast<double>(budget);
    out[static_cast<std::size_t>(k)] = {
        mean, std::sqrt(std::max(0.0, mean * (1.0 - mean) / static_cast<double>(budget))), budget,
        seed};
  }
  return out;
}

std::vector<McEstimate> scans_psi_mc(const ScansModel& model, int lag, std::uint64_t budget,
                                     std::uint64_t seed) {
  model.validate();
  if (lag < 0 || lag >= model.m)
    throw std::invalid_argument("scans_psi_mc: lag must lie in [0, m-1]");
  const int p = model.p;
  const std::vector<double> pi = scans_pi(model);
  RngStream rng(seed, 1);
  const int width = model.m + lag;
  std::vector<double> hits(static_cast<std::size_t>(p) * static_cast<std::size_t>(p), 0.0);
  for (std::uint64_t s = 0; s < budget; ++s) {
    std::vector<std::size_t> draw(static_cast<std::size_t>(width));
    for (int i = 0; i < width; ++i) draw[static_cast<std::size_t>(i)] = sample_atom(model, rng);
    for (int k = 0; k < p; ++k) {
      double r_late = 0.0;
      for (int l = 0; l < model.m; ++l)
        r_late += model.atoms[draw[static_cast<std::size_t>(lag + l)]][static_cast<std::size_t>(k)];
      if (r_late > model.thresholds[static_cast<std::size_t>(k)]) continue;
      for (int l2 = 0; l2 < p; ++l2) {
        double r_early = 0.0;
        for (int l = 0; l < model.m; ++l)
          r_early += model.atoms[draw[static_cast<std::size_t>(l)]][static_cast<std::size_t>(l2)];
        if (r_early <= model.thresholds[static_cast<std::size_t>(l2)])
          hits[static_cast<std::size_t>(k) * static_cast<std::size_t>(p) +
               static_cast<std::size_t>(l2)] += 1.0;
      }
    }
  }
  std::vector<McEstimate> out(hits.size());
  for (std::size_t e = 0; e < hits.size(); ++e) {
    const double mean = hits[e] / static_cast<double>(budget);
    const int k = static_cast<int>(e) / p;
    const int l = static_cast<int>(e) % p;
    out[e] = {mean - pi[static_cast<std::size_t>(k)] * pi[static_cast<std::size_t>(l)],
              std::sqrt(std::max(0.0, mean * (1.0 - mean) / static_cast<double>(budget))), budget,
              seed};
  }
  return out;
}

ScansStats scans_stats(const ScansModel& model) {
  ScansStats stats;
  stats.pi = scans_pi(model);
  stats.psi.resize(static_cast<std::size_t>(model.m));
  for (int d = 0; d < model.m; ++d) stats.psi[static_cast<std::size_t>(d)] = scans_psi(model, d);
  return stats;
}

CovMatrix scans_sigma(const ScansModel& model, const ScansStats& stats) {
  const int p = model.p;
  CovMatrix sigma(static_cast<std::size_t>(p));
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) {
      double v = stats.psi_at(0, k, l, p);
      for (int d = 1; d < model.m; ++d)
        v += stats.psi_at(d, l, k, p) + stats.psi_at(d, k, l, p);
      sigma.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) = v;
    }
  }
  return sigma;
}

namespace {

// Streams the indicator vector 1[R_{s,k} <= a_k] for s = 1..count using a
// circular window of the last m innovation vectors.
class ScanStream {
 public:
  ScanStream(const ScansModel& model, RngStream& rng) : model_(model), rng_(rng) {
    window_.assign(static_cast<std::size_t>(model.m) * static_cast<std::size_t>(model.p), 0.0);
    r_.assign(static_cast<std::size_t>(model.p), 0.0);
    // prefill V_1 .. V_{m-1}
    for (int l = 0; l + 1 < model_.m; ++l) push(l);
    next_slot_ = model_.m - 1;
  }

  // Advances to the next scan and writes the indicators.
  void step(std::vector<char>& ind) {
    push(next_slot_);
    next_slot_ = (next_slot_ + 1) % model_.m;
    for (int k = 0; k < model_.p; ++k)
      ind[static_cast<std::size_t>(k)] =
          r_[static_cast<std::size_t>(k)] <= model_.thresholds[static_cast<std::size_t>(k)] ? 1
                                                                                            : 0;
  }

 private:
  void push(int slot) {
    const std::size_t a = sample_atom(model_, rng_);
    for (int k = 0; k < model_.p; ++k) {
      double& cell =
          window_[static_cast<std::size_t>(slot) * static_cast<std::size_t>(model_.p) +
                  static_cast<std::size_t>(k)];
      r_[static_cast<std::size_t>(k)] += model_.atoms[a][static_cast<std::size_t>(k)] - cell;
      cell = model_.atoms[a][static_cast<std::size_t>(k)];
    }
  }

  const ScansModel& model_;
  RngStream& rng_;
  std::vector<double> window_;
  std::vector<double> r_;
  int next_slot_ = 0;
};

}  // namespace

void scans_fill_array(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                      RngStream& rng, std::span<double> out) {
  const int p = model.p;
  const std::uint64_t n = model.n;
  const std::uint64_t scan_count = n * n;
  ScanStream stream(model, rng);
  std::vector<char> ind(static_cast<std::size_t>(p));
  if (regime == ScansRegime::block_average) {
    if (out.size() != n * static_cast<std::size_t>(p))
      throw std::invalid_argument("scans_fill_array: output size mismatch");
    std::vector<double> counts(static_cast<std::size_t>(p));
    for (std::uint64_t i = 0; i < n; ++i) {
      std::fill(counts.begin(), counts.end(), 0.0);
      for (std::uint64_t j = 0; j < n; ++j) {
        stream.step(ind);
        for (int k = 0; k < p; ++k) counts[static_cast<std::size_t>(k)] += ind[static_cast<std::size_t>(k)];
      }
      for (int k = 0; k < p; ++k)
        out[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)] =
            counts[static_cast<std::size_t>(k)] / static_cast<double>(n) -
            stats.pi[static_cast<std::size_t>(k)];
    }
  } else {
    if (out.size() != scan_count * static_cast<std::size_t>(p))
      throw std::invalid_argument("scans_fill_array: output size mismatch");
    for (std::uint64_t i = 0; i < scan_count; ++i) {
      stream.step(ind);
      for (int k = 0; k < p; ++k)
        out[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)] =
            (static_cast<double>(ind[static_cast<std::size_t>(k)]) -
             stats.pi[static_cast<std::size_t>(k)]) /
            static_cast<double>(n);
    }
  }
}

PathGrid scans_sample_path(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                           RngStream& rng, int refinement) {
  const int p = model.p;
  const std::uint64_t horizon = regime == ScansRegime::block_average ? model.n : model.n * model.n;
  std::vector<double> x(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(p));
  scans_fill_array(model, regime, stats, rng, x);

  const std::size_t grid_n = static_cast<std::size_t>(refinement) * horizon;
  PathGrid path(grid_n, p);
  std::vector<double> level(static_cast<std::size_t>(p), 0.0);
  for (std::size_t q = 1; q <= grid_n; ++q) {
    if (q % static_cast<std::size_t>(refinement) == 0) {
      const std::size_t i = q / static_cast<std::size_t>(refinement) - 1;
      for (int k = 0; k < p; ++k)
        level[static_cast<std::size_t>(k)] +=
            x[i * static_cast<std::size_t>(p) + static_cast<std::size_t>(k)];
    }
    double* dst = path.point(q);
    for (int k = 0; k < p; ++k) dst[k] = level[static_cast<std::size_t>(k)];
  }
  return path;
}

DependencyModel scans_dependency_model(const ScansModel& model, ScansRegime regime) {
  DependencyModel dep;
  dep.p = model.p;
  dep.n = model.n;
  dep.lambdas.assign(static_cast<std::size_t>(model.p), model.n);
  if (regime == ScansRegime::block_average) {
    dep.regime = DependencyModel::Regime::local3;
    dep.neighborhoods = model.m == 1 ? independent_neighborhoods(model.n)
                                     : banded_neighborhoods(model.n, 1);
  } else {
    dep.regime = DependencyModel::Regime::proposition_weak;
    dep.neighborhoods =
        banded_neighborhoods(model.n * model.n, static_cast<std::size_t>(model.m - 1));
  }
  return dep;
}

ScansOracle::ScansOracle(ScansModel model, ScansRegime regime)
    : model_(std::move(model)), regime_(regime) {
  model_.validate();
  stats_ = scans_stats(model_);
}

std::size_t ScansOracle::rows() const {
  return regime_ == ScansRegime::block_average ? model_.n : model_.n * model_.n;
}

long ScansOracle::dependence_range() const {
  return regime_ == ScansRegime::block_average ? 1 : model_.m - 1;
}

double ScansOracle::second_moment(std::size_t i, int k, std::size_t j, int l) const {
  const int p = model_.p;
  const double n = static_cast<double>(model_.n);
  if (regime_ == ScansRegime::block_average) {
    if (i == j) {
      double acc = stats_.psi_at(0, k, l, p);
      for (int d = 1; d < model_.m; ++d)
        acc += (1.0 - static_cast<double>(d) / n) *
               (stats_.psi_at(d, l, k, p) + stats_.psi_at(d, k, l, p));
      return acc / n;
    }
    if (j == i + 1 || i == j + 1) {
      const bool forward = j == i + 1;  // lower row carries the earlier scans
      double acc = 0.0;
      for (int d = 1; d < model_.m; ++d)
        acc += static_cast<double>(d) *
               (forward ? stats_.psi_at(d, k, l, p) : stats_.psi_at(d, l, k, p));
      return acc / (n * n);
    }
    return 0.0;
  }
  const std::size_t lo = std::min(i, j);
  const std::size_t hi = std::max(i, j);
  if (hi - lo >= static_cast<std::size_t>(model_.m)) return 0.0;
  const int d = static_cast<int>(hi - lo);
  const double psi = i <= j ? stats_.psi_at(d, k, l, p) : stats_.psi_at(d, l, k, p);
  return psi / (n * n);
}

void ScansOracle::sample_array(RngStream& rng, std::span<double> out) const {
  scans_fill_array(model_, regime_, stats_, rng, out);
}

BoundReport scans_bound(const ScansModel& model, ScansRegime regime, const ScansStats& stats,
                        const FunctionalSpec* g) {
  model.validate();
  const int p = model.p;
  const double n = static_cast<double>(model.n);
  const double root_n = std::sqrt(n);

  // sum_k (psi_kk(0) + 2 sum_d psi_kk(d)) feeds the modulus term.
  double modulus_base = 0.0;
  for (int k = 0; k < p; ++k) {
    double acc = stats.psi_at(0, k, k, p);
    for (int d = 1; d < model.m; ++d) acc += 2.0 * stats.psi_at(d, k, k, p);
    modulus_base += acc;
  }
  const double modulus = 6.0 * std::sqrt(5.0) * std::sqrt(static_cast<double>(p)) /
                         std::sqrt(2.0 * std::numbers::ln2) * std::sqrt(std::log(2.0 * n)) /
                         root_n * std::sqrt(std::max(0.0, modulus_base));

  double var_mismatch = 0.0;  // (1/2n) sum_{k,l} |sum_d d (psi_lk + psi_kl)|
  double cross_blocks = 0.0;  // (1/n) sum_{k,l} sum_d d psi_kl
  for (int k = 0; k < p; ++k) {
    for (int l = 0; l < p; ++l) {
      double acc = 0.0, acc_one = 0.0;
      for (int d = 1; d < model.m; ++d) {
        acc += static_cast<double>(d) * (stats.psi_at(d, l, k, p) + stats.psi_at(d, k, l, p));
        acc_one += static_cast<double>(d) * stats.psi_at(d, k, l, p);
      }
      var_mismatch += std::abs(acc);
      cross_blocks += acc_one;
    }
  }
  var_mismatch /= 2.0 * n;
  cross_blocks /= n;

  BoundReport report;
  report.norm_class = NormClass::M1;
  if (regime == ScansRegime::block_average) {
    // (sum_k q_k^{1/2})^3 with q_k = psi_kk(0) + 2 sum_d (1 - d/n) psi_kk(d).
    double root_sum = 0.0;
    for (int k = 0; k < p; ++k) {
      double q = stats.psi_at(0, k, k, p);
      for (int d = 1; d < model.m; ++d)
        q += 2.0 * (1.0 - static_cast<double>(d) / n) * stats.psi_at(d, k, k, p);
      root_sum += std::sqrt(std::max(0.0, q));
    }
    const double cube = root_sum * root_sum * root_sum;
    report.regime = "local3";
    report.terms = {
        {"third-moment cluster", "eps1", 1.5 / root_n * cube, 0.0, true},
        {"dependence overlap", "eps2", 2.0 / (3.0 * root_n) * cube, 0.0, true},
        {"split expectation", "eps3", 2.0 / root_n * cube, 0.0, true},
        {"variance mismatch", "eps4", var_mismatch, 0.0, true},
        {"neighbor covariance", "eps5", cross_blocks, 0.0, true},
        {"brownian modulus", "eps6", modulus, 0.0, true},
        {"jump deviation", "eps7", 0.0, 0.0, true},
    };
  } else {
    double root_sum = 0.0;
    for (int k = 0; k < p; ++k) root_sum += std::sqrt(std::max(0.0, stats.psi_at(0, k, k, p)));
    const double cube = root_sum * root_sum * root_sum;
    const double m2 = static_cast<double>(model.m) * static_cast<double>(model.m);

    double window = 0.0;  // delta7
    if (g != nullptr) {
      for (int k = 0; k < p; ++k) {
        const auto dir = g->indicator_direction_bound(k, model.n);
        if (!dir.has_value())
          throw std::invalid_argument("functional lacks direction bound (needed for delta7)");
        double var = stats.psi_at(0, k, k, p);
        for (int d = 1; d < model.m; ++d)
          var += 2.0 * (1.0 - static_cast<double>(d) / (n * n)) * stats.psi_at(d, k, k, p);
        window += *dir * std::sqrt(std::max(0.0, var));
      }
    }
    report.regime = "proposition-weak";
    report.terms = {
        {"third-moment cluster", "delta1", 2.0 * m2 / (3.0 * n) * cube, 0.0, true},
        {"dependence overlap", "delta2", m2 / n * cube, 0.0, true},
        {"split expectation", "delta3", 2.0 * m2 / n * cube, 0.0, true},
        {"block variance mismatch", "delta4", var_mismatch, 0.0, true},
        {"block cross covariance", "delta5", cross_blocks, 0.0, true},
        {"brownian modulus", "delta6", modulus, 0.0, true},
        {"window direction", "delta7", window, 0.0, false},
    };
  }
  report.total = report.term_sum(false);
  return report;
}

}  // namespace fclt
