#include "verify.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "cylinder_functional.hpp"
#include "gaussian_paths.hpp"
#include "ou_stein.hpp"

namespace fclt {

std::vector<double> IidModel::third_abs_moments() const {
  std::vector<double> out(static_cast<std::size_t>(p));
  const double c = 2.0 * std::sqrt(2.0 / std::numbers::pi);
  for (int m = 0; m < p; ++m) {
    const double var = sigma.at(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
    out[static_cast<std::size_t>(m)] = c * std::pow(var, 1.5);
  }
  return out;
}

std::vector<double> IidModel::second_abs_moments() const {
  std::vector<double> out(static_cast<std::size_t>(p));
  for (int m = 0; m < p; ++m)
    out[static_cast<std::size_t>(m)] =
        sigma.at(static_cast<std::size_t>(m), static_cast<std::size_t>(m));
  return out;
}

namespace {

VerifyReport assemble(const std::string& regime, std::uint64_t n, int p,
                      const VerifyOptions& options, const McEstimate& dist,
                      const BoundReport& report, const FunctionalSpec& g) {
  VerifyReport out;
  out.regime = regime;
  out.n = n;
  out.p = p;
  out.seed = options.seed;
  out.samples = options.samples;
  out.dist = dist;
  out.bound_report = report;
  try {
    out.bound = report.weighted_total(g, /*inflate_3se=*/true);
  } catch (const std::invalid_argument& e) {
    throw std::invalid_argument(std::string("norm class mismatch: ") + e.what());
  }
  out.margin = out.bound - dist.mean;
  out.pass = dist.mean + 3.0 * dist.se <= out.bound;
  return out;
}

}  // namespace

VerifyReport verify_scans(const ScansModel& model, ScansRegime regime, const FunctionalSpec& g,
                          const VerifyOptions& options) {
  model.validate();
  const ScansOracle oracle(model, regime);
  const ScansStats& stats = oracle.stats();
  const CovMatrix sigma = scans_sigma(model, stats);
  const DependencyModel dep = scans_dependency_model(model, regime);

  const std::uint64_t horizon =
      regime == ScansRegime::block_average ? model.n : model.n * model.n;
  const std::size_t grid_n = static_cast<std::size_t>(options.refinement) * horizon;

  const PathSampler y_sampler = [&model, regime, &stats, r = options.refinement](RngStream& rng) {
    return scans_sample_path(model, regime, stats, rng, r);
  };
  const PathSampler z_sampler = [sigma, grid_n](RngStream& rng) {
    return sample_correlated_bm(sigma, grid_n, rng);
  };

  const McEstimate dist =
      distance([&g](const PathGrid& w) { return g.eval(w); }, y_sampler, z_sampler,
               options.samples, options.seed);

  const BoundReport report =
      regime == ScansRegime::block_average
          ? eps_terms(dep, oracle, sigma, options.oracle_budget, options.seed + 1)
          : delta_terms(dep, oracle, sigma, g, options.oracle_budget, options.seed + 1);

  return assemble(report.regime, model.n, model.p, options, dist, report, g);
}

VerifyReport verify_iid(const IidModel& model, const FunctionalSpec& g,
                        const VerifyOptions& options) {
  if (model.p < 1 || model.sigma.dim() != static_cast<std::size_t>(model.p))
    throw std::invalid_argument("verify_iid: dimension mismatch");
  const std::size_t grid_n = static_cast<std::size_t>(options.refinement) * model.n;
  const CovMatrix root = sym_sqrt(model.sigma);
  const std::uint64_t n = model.n;
  const int p = model.p;
  const int refinement = options.refinement;

  const PathSampler y_sampler = [root, n, p, refinement, grid_n](RngStream& rng) {
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    PathGrid path(grid_n, p);
    std::vector<double> level(static_cast<std::size_t>(p), 0.0), gvec(static_cast<std::size_t>(p));
    for (std::size_t q = 1; q <= grid_n; ++q) {
      if (q % static_cast<std::size_t>(refinement) == 0) {
        for (auto& v : gvec) v = rng.next_gaussian();
        for (int k = 0; k < p; ++k) {
          double acc = 0.0;
          for (int l = 0; l < p; ++l)
            acc += root.at(static_cast<std::size_t>(k), static_cast<std::size_t>(l)) *
                   gvec[static_cast<std::size_t>(l)];
          level[static_cast<std::size_t>(k)] += scale * acc;
        }
      }
      double* dst = path.point(q);
      for (int k = 0; k < p; ++k) dst[k] = level[static_cast<std::size_t>(k)];
    }
    return path;
  };
  const CovMatrix sigma = model.sigma;
  const PathSampler z_sampler = [sigma, grid_n](RngStream& rng) {
    return sample_correlated_bm(sigma, grid_n, rng);
  };

  const McEstimate dist =
      distance([&g](const PathGrid& w) { return g.eval(w); }, y_sampler, z_sampler,
               options.samples, options.seed);
  const BoundReport report =
      iid_bound(model.p, model.n, model.sigma, model.third_abs_moments(),
                model.second_abs_moments());
  return assemble(report.regime, model.n, model.p, options, dist, report, g);
}

VerifyReport verify_ustat(const UStatModel& model, const FunctionalSpec& g,
                          const VerifyOptions& options) {
  const UStatProjection proj = ustat_projection(model, options.oracle_budget, options.seed + 1);
  const std::size_t grid_n = static_cast<std::size_t>(options.refinement) * model.n;

  const PathSampler y_sampler = [&model, r = options.refinement](RngStream& rng) {
    return ustat_paths(model, rng, r).y;
  };
  const CovMatrix one = CovMatrix::identity(1);
  const PathSampler z_sampler = [one, grid_n](RngStream& rng) {
    return sample_correlated_bm(one, grid_n, rng);
  };

  const McEstimate dist =
      distance([&g](const PathGrid& w) { return g.eval(w); }, y_sampler, z_sampler,
               options.samples, options.seed);

  // +3 se shifts of MC-estimated projection inputs keep the bound on the
  // conservative side: sigma_w^2 appears only in denominators, so it moves
  // down while everything else moves up.
  const double sw2 = std::max(1e-12, proj.sigma_w2.mean - 3.0 * proj.sigma_w2.se);
  BoundReport report = ustat_bound(model.n, proj.sigma_h2.mean + 3.0 * proj.sigma_h2.se, sw2,
                                   proj.e_abs_w3.mean + 3.0 * proj.e_abs_w3.se,
                                   proj.e_abs_w1.mean + 3.0 * proj.e_abs_w1.se);
  return assemble(report.regime, model.n, 1, options, dist, report, g);
}

std::string VerifyReport::to_json() const {
  nlohmann::json j;
  j["regime"] = regime;
  j["n"] = n;
  j["p"] = p;
  j["seed"] = seed;
  j["samples"] = samples;
  j["distance"] = {{"mean", dist.mean}, {"se", dist.se}, {"samples", dist.samples},
                   {"seed", dist.seed}};
  j["bound"] = bound;
  j["margin"] = margin;
  j["pass"] = pass;
  j["bound_report"] = nlohmann::json::parse(bound_report.to_json());
  return j.dump(2);
}

VerifyReport VerifyReport::from_json(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  VerifyReport r;
  r.regime = j.at("regime").get<std::string>();
  r.n = j.at("n").get<std::uint64_t>();
  r.p = j.at("p").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.samples = j.at("samples").get<std::uint64_t>();
  r.dist.mean = j.at("distance").at("mean").get<double>();
  r.dist.se = j.at("distance").at("se").get<double>();
  r.dist.samples = j.at("distance").at("samples").get<std::uint64_t>();
  r.dist.seed = j.at("distance").at("seed").get<std::uint64_t>();
  r.bound = j.at("bound").get<double>();
  r.margin = j.at("margin").get<double>();
  r.pass = j.at("pass").get<bool>();
  r.bound_report = BoundReport::from_json(j.at("bound_report").dump());
  return r;
}

std::string VerifyReport::csv_header() {
  return "regime,n,p,seed,samples,distance,distance_se,bound,margin,pass";
}

std::string VerifyReport::csv_row() const {
  std::ostringstream os;
  os.precision(17);
  os << regime << ',' << n << ',' << p << ',' << seed << ',' << samples << ',' << dist.mean << ','
     << dist.se << ',' << bound << ',' << margin << ',' << (pass ? "true" : "false");
  return os.str();
}

std::string SteinCheckReport::to_json() const {
  nlohmann::json j;
  j["all_pass"] = all_pass;
  j["checks"] = nlohmann::json::array();
  for (const auto& line : lines)
    j["checks"].push_back({{"name", line.name},
                           {"pass", line.pass},
                           {"value", line.value},
                           {"tolerance", line.tolerance}});
  return j.dump(2);
}

SteinCheckReport stein_check(const DependencyModel& dep, const CovMatrix& cov_full,
                             std::uint64_t budget, std::uint64_t seed) {
  require_valid(dep);
  SteinCheckReport report;
  auto add = [&report](const std::string& name, double value, double tol) {
    const bool ok = value <= tol;
    report.lines.push_back({name, ok, value, tol});
    report.all_pass = report.all_pass && ok;
  };

  // 1) Stationary marginal preserved by one OU step.
  {
    const auto mixer = std::make_shared<CovMatrix>(sym_sqrt(cov_full));
    RngStream rng(seed, 11);
    const std::size_t d = cov_full.dim();
    double sum = 0.0, sumsq = 0.0;
    const std::uint64_t draws = budget;
    for (std::uint64_t s = 0; s < draws; ++s) {
      OuArrayState st = ou_stationary_state(mixer, rng);
      st = ou_step(st, 0.7, rng);
      const double v = st.x[s % d];
      sum += v * v;
      sumsq += v * v * v * v;
    }
    const double nd = static_cast<double>(draws);
    const double mean = sum / nd;
    const double se = std::sqrt(std::max(0.0, (sumsq - nd * mean * mean) / (nd - 1.0)) / nd);
    add("ou stationary variance", std::abs(mean - 1.0), 3.0 * se);
  }

  // 2) Semigroup decomposition at v in {0, 0.7, 50}. The band is the
  //    Bonferroni one: the suite compares every covariance entry at once.
  for (const double v : {0.0, 0.7, 50.0}) {
    RngStream rng(seed, 13 + static_cast<std::uint64_t>(v * 10.0));
    const auto dec = check_stationary_decomposition(dep, cov_full, 0.3, v, budget, rng);
    std::ostringstream name;
    name << "stationary decomposition v=" << v;
    if (v == 0.0)
      add(name.str(), dec.max_abs_deviation, 0.0);
    else
      add(name.str(), dec.max_abs_deviation, dec.family_z * dec.max_dev_se);
  }

  // 3) Generator null at stationarity for linear and quadratic cylinders.
  {
    const std::size_t grid_n = common_grid_size(dep.lambdas, kDefaultRefinement);
    const DnSampler dn = make_dn_sampler(cov_full, dep, grid_n);
    const CylinderFunctional lin(make_linear_map({1.0}), {1.0}, {0});
    const CylinderFunctional quad(make_square_map(1), {1.0}, {0});
    for (const CylinderFunctional* f : {&lin, &quad}) {
      const CovMatrix pc = projection_covariance(*f, dep, cov_full);
      const McEstimate e = estimate(
          [f, &pc](const PathGrid& w) { return generator_apply_exact(*f, w, pc); }, dn, budget,
          seed + 17);
      std::ostringstream name;
      name << "stein null (" << f->outer().name << ")";
      add(name.str(), std::abs(e.mean), 3.0 * e.se);
    }
  }

  // 4) Generator vs semigroup difference quotient, Richardson-extrapolated
  //    over u in {0.1, 0.01} with common random numbers.
  {
    const std::size_t grid_n = common_grid_size(dep.lambdas, kDefaultRefinement);
    const DnSampler dn = make_dn_sampler(cov_full, dep, grid_n);
    const CylinderFunctional quad(make_square_map(1), {1.0}, {0});
    RngStream wrng(seed, 23);
    const PathGrid w = dn(wrng);
    const CovMatrix pc = projection_covariance(quad, dep, cov_full);
    const double exact = generator_apply_exact(quad, w, pc);
    const double f0 = quad.eval(w);
    // Per-draw Richardson combination of the difference quotients at
    // u = 0.1 and u = 0.01, on common D_n draws.
    const double u1 = 0.1, u2 = 0.01;
    const double c2 = (1.0 / u2) * (u1 / (u1 - u2));
    const double c1 = (1.0 / u1) * (u2 / (u1 - u2));
    const McEstimate rich = estimate(
        [&quad, &w, f0, u1, u2, c1, c2](const PathGrid& d) {
          PathGrid m1 = d;
          m1.axpby(ou_sigma(u1), std::exp(-u1), w);
          PathGrid m2 = d;
          m2.axpby(ou_sigma(u2), std::exp(-u2), w);
          return c2 * (quad.eval(m2) - f0) - c1 * (quad.eval(m1) - f0);
        },
        dn, budget, seed + 29);
    add("generator consistency", std::abs(rich.mean - exact),
        3.0 * rich.se + 1e-3 * std::abs(exact));
  }

  return report;
}

}  // namespace fclt
