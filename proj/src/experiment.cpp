#include "metrix/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "metrix/brackets.hpp"
#include "metrix/diagnostics.hpp"
#include "metrix/elliptic.hpp"
#include "metrix/field_io.hpp"
#include "metrix/findim.hpp"
#include "metrix/functionals.hpp"
#include "metrix/operators.hpp"
#include "metrix/presets.hpp"

namespace metrix {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt_time(double t) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", t);
  return buf;
}

} // namespace

double ExperimentResult::value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw std::out_of_range("summary has no entry named " + key);
}

bool ExperimentResult::has(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return true;
  return false;
}

GridSpec grid_for(const ExperimentConfig& cfg) {
  const std::string& p = cfg.problem;
  if (p == "heat1d") return GridSpec::periodic_line1d(cfg.resolution);
  if (p == "beltrami3d") return GridSpec::torus3d(cfg.resolution);
  if (p.rfind("euler-collision", 0) == 0 || p == "euler-perturbed-collision")
    return GridSpec::dirichlet_rect2d(cfg.resolution, cfg.resolution);
  if (p == "gs-collision") return GridSpec::gs_rect2d(cfg.resolution, cfg.resolution);
  if (p.rfind("findim-", 0) == 0)
    throw std::invalid_argument("finite-dimensional presets have no grid");
  return GridSpec::torus2d(cfg.resolution);
}

ScalarField gaussian_profile(const GridSpec& g, double x0, double y0, double w1, double w2,
                             double amplitude) {
  return ScalarField::sample(g, [=](double x, double y) {
    const double dx = (x - x0) / w1;
    const double dy = (y - y0) / w2;
    return amplitude * std::exp(-dx * dx - dy * dy);
  });
}

ScalarField islands_potential(const GridSpec& g) {
  return ScalarField::sample(g, [](double x, double y) {
    const double c = std::cos(x), s = std::sin(y);
    return c * c * s * s;
  });
}

ScalarField heat_initial_condition(const GridSpec& g, std::uint64_t seed, int modes) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> amp(0.5, 1.0);
  std::vector<double> amps(modes), phases(modes);
  for (int k = 0; k < modes; ++k) {
    amps[k] = amp(rng);
    phases[k] = phase(rng);
  }
  ScalarField u(g);
  for (int i = 0; i < g.n[0]; ++i) {
    const double x = g.coord(0, i);
    double v = 0.5; // nonzero level so the conserved integral is exercised
    for (int k = 0; k < modes; ++k) v += amps[k] * std::cos((k + 1) * x + phases[k]);
    u.v[i] = v;
  }
  return u;
}

VectorField helical_initial_field(const GridSpec& g, double a, int m, int nmode,
                                  bool normalize) {
  if (g.kind != GridKind::Torus3D)
    throw std::invalid_argument("helical_initial_field: torus3d required");
  const double root = std::sqrt(double(m) * m + double(nmode) * nmode);
  auto chi = [](double y) { return y * y * (1.0 - y) * (1.0 - y); };
  VectorField A(g, 3);
  for (int i = 0; i < g.n[0]; ++i) {
    const double x1 = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double x2 = g.coord(1, j);
      for (int k = 0; k < g.n[2]; ++k) {
        const double x3 = g.coord(2, k);
        const double eta = chi(x1) * chi(x2) * chi(x3);
        const std::size_t idx = g.index(i, j, k);
        const double sm = std::sin(kPi * m * x1), cm = std::cos(kPi * m * x1);
        const double sn = std::sin(kPi * nmode * x2), cn = std::cos(kPi * nmode * x2);
        A.comp(0)[idx] = eta * a * (nmode / root) * sm * cn;
        A.comp(1)[idx] = -eta * a * (m / root) * cm * sn;
        A.comp(2)[idx] = eta * a * sm * sn;
      }
    }
  }
  // curl of the sampled potential: divergence-free to spectral round-off
  VectorField B = curl3d(A);
  if (normalize) {
    double bmax = 0.0;
    for (double x : B.v) bmax = std::max(bmax, std::abs(x));
    if (bmax > 0.0)
      for (double& x : B.v) x /= bmax;
  }
  return B;
}

// ---------------------------------------------------------------------------
// shared scalar-problem plumbing

namespace {

struct ScalarCtx {
  GridSpec grid;
  Measure mu;
  EntropySpec entropy;
  HamiltonianSpec ham;
  std::shared_ptr<BracketRhs> bracket;
  double H0 = 0.0;
  bool record_phi_l2sq = false;
  bool record_min_u = false;
  // optional field history (per record) for post-run distance fits
  std::vector<double>* history_t = nullptr;
  std::vector<State>* history = nullptr;
};

ProblemHooks make_scalar_hooks(const std::shared_ptr<ScalarCtx>& ctx) {
  ProblemHooks hooks;
  hooks.rhs = [ctx](const State& s) {
    ScalarField u(ctx->grid, s);
    return (*ctx->bracket)(u).v;
  };
  hooks.rhs_norm = [ctx](const State& r) {
    double acc = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) acc += r[i] * r[i] * ctx->mu.w[i];
    return std::sqrt(acc);
  };
  hooks.record = [ctx](double t, const State& s) {
    ScalarField u(ctx->grid, s);
    DiagnosticsRecord rec;
    rec.t = t;
    rec.S = entropy_value(ctx->entropy, u, ctx->mu);
    rec.H = hamiltonian_value(ctx->ham, u, ctx->mu);
    rec.H_rel_err = ctx->H0 != 0.0 ? (rec.H - ctx->H0) / std::abs(ctx->H0) : rec.H - ctx->H0;
    rec.M = integrate(u, ctx->mu);
    if (ctx->record_phi_l2sq) {
      const ScalarField phi = hamiltonian_derivative(ctx->ham, u, ctx->mu);
      rec.extras.emplace_back("phi_l2sq", inner(phi, phi, ctx->mu));
    }
    if (ctx->record_min_u) {
      double mn = u.v[0];
      for (double x : u.v) mn = std::min(mn, x);
      rec.extras.emplace_back("min_u", mn);
    }
    if (ctx->history) {
      ctx->history_t->push_back(t);
      ctx->history->push_back(s);
    }
    return rec;
  };
  return hooks;
}

double h_rel_err_max(const std::vector<DiagnosticsRecord>& recs) {
  double m = 0.0;
  for (const auto& r : recs) m = std::max(m, std::abs(r.H_rel_err));
  return m;
}

double mass_rel_err_max(const std::vector<DiagnosticsRecord>& recs) {
  if (recs.empty()) return 0.0;
  const double M0 = recs.front().M;
  double m = 0.0;
  for (const auto& r : recs)
    m = std::max(m, std::abs(r.M - M0) / std::max(std::abs(M0), 1e-300));
  return m;
}

double entropy_increase_max(const std::vector<DiagnosticsRecord>& recs) {
  double m = 0.0;
  for (std::size_t i = 1; i < recs.size(); ++i) {
    const double rise = recs[i].S - recs[i - 1].S;
    m = std::max(m, rise / std::max(std::abs(recs[i - 1].S), 1e-300));
  }
  return m;
}

void write_artifacts(const ExperimentConfig& cfg, const ExperimentResult& result,
                     const std::vector<std::string>& extra_names) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  {
    std::ofstream os(fs::path(cfg.out_dir) / "config.txt");
    os << serialize_config(cfg);
  }
  {
    std::ofstream os(fs::path(cfg.out_dir) / "diagnostics.csv");
    os << "# metrix-diagnostics v1\n";
    os << "t,S,H,H_rel_err,M,rhs_norm";
    for (const auto& name : extra_names) os << "," << name;
    os << "\n";
    char buf[40];
    auto put = [&](double x, bool lead_comma) {
      std::snprintf(buf, sizeof(buf), "%.17g", x);
      if (lead_comma) os << ",";
      os << buf;
    };
    for (const auto& r : result.trajectory.records) {
      put(r.t, false);
      put(r.S, true);
      put(r.H, true);
      put(r.H_rel_err, true);
      put(r.M, true);
      put(r.rhs_norm, true);
      for (const auto& name : extra_names) put(r.extra(name), true);
      os << "\n";
    }
  }
  {
    nlohmann::ordered_json j;
    j["problem"] = cfg.problem;
    j["completed"] = !result.trajectory.failed;
    if (result.trajectory.failed) j["failure"] = result.trajectory.failure;
    j["t_final"] = result.trajectory.final_time;
    j["steps"] = result.trajectory.steps;
    for (const auto& [k, v] : result.summary) j[k] = v;
    std::ofstream os(fs::path(cfg.out_dir) / "summary.json");
    os << j.dump(2) << "\n";
  }
}

std::function<void(double, const State&)> scalar_snapshot_writer(
    const ExperimentConfig& cfg, const GridSpec& grid, bool enabled) {
  if (!enabled) return nullptr;
  std::filesystem::create_directories(cfg.out_dir);
  const std::string dir = cfg.out_dir;
  return [dir, grid](double t, const State& s) {
    ScalarField f(grid, s);
    write_field(dir + "/snapshot_t" + fmt_time(t) + ".field", f);
  };
}

// ---------------------------------------------------------------------------
// presets

ExperimentResult run_heat(const ExperimentConfig& cfg, bool artifacts) {
  auto ctx = std::make_shared<ScalarCtx>();
  ctx->grid = grid_for(cfg);
  ctx->mu = Measure::unit(ctx->grid);
  ctx->entropy = EntropySpec::l2();
  ctx->ham = HamiltonianSpec::mass();
  ctx->bracket = std::make_shared<BracketRhs>(BracketRhs::Kind::Laplacian, ctx->entropy,
                                              ctx->ham, ctx->mu);
  ScalarField u0 = heat_initial_condition(ctx->grid, cfg.ic.seed, cfg.ic.modes);
  ctx->H0 = hamiltonian_value(ctx->ham, u0, ctx->mu);

  ProblemHooks hooks = make_scalar_hooks(ctx);
  hooks.snapshot = scalar_snapshot_writer(cfg, ctx->grid, artifacts);

  // distance to the flat profile, traced per record
  const double mean = domain_mean(u0, ctx->mu);
  ScalarField ueta(ctx->grid);
  ueta.v.assign(ueta.v.size(), mean);
  auto base_record = hooks.record;
  hooks.record = [ctx, base_record, ueta](double t, const State& s) {
    DiagnosticsRecord rec = base_record(t, s);
    ScalarField u(ctx->grid, s);
    double d2 = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
      const double d = s[i] - ueta.v[i];
      d2 += d * d * ctx->mu.w[i];
    }
    rec.extras.emplace_back("dist_ueta", std::sqrt(d2));
    return rec;
  };

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, u0.v, cfg.run);
  const auto& recs = result.trajectory.records;

  const double S_eta = entropy_value(ctx->entropy, ueta, ctx->mu);
  std::vector<double> times, svals;
  double ratio_max = 0.0;
  const double d0 = recs.front().extra("dist_ueta");
  for (const auto& r : recs) {
    times.push_back(r.t);
    svals.push_back(r.S);
    if (r.t > 0.0)
      ratio_max = std::max(ratio_max, r.extra("dist_ueta") / (std::exp(-r.t) * d0));
  }
  result.summary.emplace_back("s_eta", S_eta);
  result.summary.emplace_back("decay_ratio_max", ratio_max);
  try {
    const RateFit fit = fit_exponential_rate(times, svals, S_eta);
    result.summary.emplace_back("entropy_rate", fit.rate);
    result.summary.emplace_back("entropy_rate_residual", fit.residual);
  } catch (const std::exception&) {
    result.summary.emplace_back("entropy_rate", 0.0);
    result.summary.emplace_back("entropy_rate_residual", -1.0);
  }
  result.summary.emplace_back("h_rel_err_max", h_rel_err_max(recs));
  result.summary.emplace_back("entropy_increase_max", entropy_increase_max(recs));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, {"dist_ueta"});
  return result;
}

ExperimentResult run_advection(const ExperimentConfig& cfg, bool projector, bool artifacts) {
  auto ctx = std::make_shared<ScalarCtx>();
  ctx->grid = grid_for(cfg);
  ctx->mu = Measure::unit(ctx->grid);
  ctx->entropy = EntropySpec::quadratic(/*subtract_mean=*/true);
  const ScalarField h = islands_potential(ctx->grid);
  ctx->ham = HamiltonianSpec::linear_weighted(h, ctx->mu);
  ctx->bracket = std::make_shared<BracketRhs>(
      projector ? BracketRhs::Kind::Projector : BracketRhs::Kind::Double, ctx->entropy,
      ctx->ham, ctx->mu);
  ScalarField u0 = gaussian_profile(ctx->grid, cfg.ic.x0, cfg.ic.y0, cfg.ic.w1, cfg.ic.w2,
                                    cfg.ic.amplitude);
  ctx->H0 = hamiltonian_value(ctx->ham, u0, ctx->mu);

  ProblemHooks hooks = make_scalar_hooks(ctx);
  hooks.snapshot = scalar_snapshot_writer(cfg, ctx->grid, artifacts);

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, u0.v, cfg.run);
  const auto& recs = result.trajectory.records;

  // energy-matched relaxed profile: M0/(4 pi^2) + H0 (h - mean h)/||h - mean h||^2
  const double M0 = integrate(u0, ctx->mu);
  const double area = 4.0 * kPi * kPi;
  ScalarField ueta(ctx->grid);
  for (std::size_t i = 0; i < ueta.v.size(); ++i)
    ueta.v[i] = M0 / area + ctx->H0 / ctx->ham.weight_norm2 * ctx->ham.weight.v[i];
  const ScalarField uT(ctx->grid, result.trajectory.final_state);

  double ueta_fluct = 0.0;
  {
    ScalarField fluct = ueta;
    const double m = domain_mean(ueta, ctx->mu);
    for (double& x : fluct.v) x -= m;
    ueta_fluct = norm_l2(fluct, ctx->mu);
  }
  {
    ScalarField diff(ctx->grid);
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] = uT.v[i] - ueta.v[i];
    result.summary.emplace_back("ueta_rel_distance",
                                norm_l2(diff, ctx->mu) / std::max(ueta_fluct, 1e-300));
  }

  if (projector) {
    // closed form: u(t) = ueta + (u0 - ueta) exp(-t)
    const double decay = std::exp(-result.trajectory.final_time);
    ScalarField err(ctx->grid);
    for (std::size_t i = 0; i < err.v.size(); ++i)
      err.v[i] = uT.v[i] - (ueta.v[i] + (u0.v[i] - ueta.v[i]) * decay);
    result.summary.emplace_back("closed_form_l2_error", norm_l2(err, ctx->mu));
  } else {
    // contour-average limit, separatrix decile excluded
    const int n_bins = 96;
    const ScalarField oracle = contour_average_oracle(u0, h, n_bins, ctx->mu);
    std::vector<double> hs = h.v;
    std::sort(hs.begin(), hs.end());
    const double cutoff = hs[hs.size() / 10];
    double num = 0.0, den = 0.0;
    std::size_t excluded = 0;
    for (std::size_t i = 0; i < h.v.size(); ++i) {
      if (h.v[i] <= cutoff) {
        ++excluded;
        continue;
      }
      const double d = uT.v[i] - oracle.v[i];
      num += d * d * ctx->mu.w[i];
      den += oracle.v[i] * oracle.v[i] * ctx->mu.w[i];
    }
    result.summary.emplace_back("contour_match_rel_l2",
                                std::sqrt(num / std::max(den, 1e-300)));
    result.summary.emplace_back("contour_excluded_fraction",
                                double(excluded) / double(h.v.size()));
  }
  result.summary.emplace_back("h_rel_err_max", h_rel_err_max(recs));
  result.summary.emplace_back("mass_rel_err_max", mass_rel_err_max(recs));
  result.summary.emplace_back("entropy_increase_max", entropy_increase_max(recs));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, {});
  return result;
}

ExperimentResult run_euler_periodic(const ExperimentConfig& cfg, bool projector,
                                    bool artifacts) {
  auto ctx = std::make_shared<ScalarCtx>();
  ctx->grid = grid_for(cfg);
  ctx->mu = Measure::unit(ctx->grid);
  ctx->entropy = EntropySpec::quadratic(/*subtract_mean=*/true);
  ctx->ham = HamiltonianSpec::euler_kinetic_periodic();
  ctx->bracket = std::make_shared<BracketRhs>(
      projector ? BracketRhs::Kind::Projector : BracketRhs::Kind::Double, ctx->entropy,
      ctx->ham, ctx->mu);
  ctx->record_phi_l2sq = true;
  ScalarField u0 = gaussian_profile(ctx->grid, cfg.ic.x0, cfg.ic.y0, cfg.ic.w1, cfg.ic.w2,
                                    cfg.ic.amplitude);
  ctx->H0 = hamiltonian_value(ctx->ham, u0, ctx->mu);

  std::vector<double> hist_t;
  std::vector<State> hist;
  if (projector) {
    ctx->history_t = &hist_t;
    ctx->history = &hist;
  }

  ProblemHooks hooks = make_scalar_hooks(ctx);
  hooks.snapshot = scalar_snapshot_writer(cfg, ctx->grid, artifacts);

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, u0.v, cfg.run);
  const auto& recs = result.trajectory.records;

  const double S_eta = ctx->H0; // lowest eigenvalue is 1 on the torus
  result.summary.emplace_back("s_eta", S_eta);
  result.summary.emplace_back("entropy_excess_rel",
                              (recs.back().S - S_eta) / std::abs(S_eta));

  ScalarField omegaT(ctx->grid, result.trajectory.final_state);
  {
    const double mean = domain_mean(omegaT, ctx->mu);
    for (double& x : omegaT.v) x -= mean;
  }
  if (projector) {
    const PhaseFit fit = best_fit_phases(omegaT, ctx->H0);
    result.summary.emplace_back("phase_fit_rel_error",
                                fit.error / std::max(norm_l2(omegaT, ctx->mu), 1e-300));
    const ConeReport cone = cone_check(recs, ctx->H0, S_eta);
    result.summary.emplace_back("cone_violations", cone.violations);
    result.summary.emplace_back("cone_worst_margin", cone.worst_margin);
    result.summary.emplace_back("cone_max_shrink", cone.max_shrink);
    {
      std::vector<double> times, svals;
      for (const auto& r : recs) {
        times.push_back(r.t);
        svals.push_back(r.S);
      }
      const RateFit sfit = fit_exponential_rate(times, svals, S_eta);
      result.summary.emplace_back("entropy_rate", sfit.rate);
    }
    {
      // distance of omega(t) to the final state, last record excluded
      std::vector<double> times, dists;
      for (std::size_t k = 0; k + 1 < hist.size(); ++k) {
        double d2 = 0.0;
        for (std::size_t i = 0; i < hist[k].size(); ++i) {
          const double d = hist[k][i] - result.trajectory.final_state[i];
          d2 += d * d * ctx->mu.w[i];
        }
        times.push_back(hist_t[k]);
        dists.push_back(std::sqrt(d2));
      }
      const RateFit dfit = fit_exponential_rate(times, dists, 0.0);
      result.summary.emplace_back("vorticity_rate", dfit.rate);
    }
  } else {
    const LinearFit fit = [&] {
      const ScalarField phi = hamiltonian_derivative(ctx->ham, omegaT, ctx->mu);
      return linear_regression(phi, omegaT, ctx->mu, false);
    }();
    result.summary.emplace_back("scatter_r2", fit.r2);
    result.summary.emplace_back("scatter_slope", fit.slope);
  }
  result.summary.emplace_back("equilibrium_residual",
                              euler_equilibrium_residual(omegaT, ctx->mu));
  result.summary.emplace_back("h_rel_err_max", h_rel_err_max(recs));
  result.summary.emplace_back("mass_rel_err_max", mass_rel_err_max(recs));
  result.summary.emplace_back("entropy_increase_max", entropy_increase_max(recs));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, {"phi_l2sq"});
  return result;
}

ExperimentResult run_collision(const ExperimentConfig& cfg, bool artifacts) {
  const bool gs = cfg.problem == "gs-collision";
  const bool gibbs = cfg.problem == "euler-collision-gibbs";
  const bool perturbed = cfg.problem == "euler-perturbed-collision";
  const double C = 0.6, D = 0.2;

  auto ctx = std::make_shared<ScalarCtx>();
  ctx->grid = grid_for(cfg);
  ctx->mu = gs ? Measure::inverse_r(ctx->grid) : Measure::unit(ctx->grid);
  ctx->entropy = gs ? EntropySpec::gs_weighted(C, D)
                    : (gibbs ? EntropySpec::gibbs() : EntropySpec::quadratic());
  ctx->ham = gs ? HamiltonianSpec::gs_poloidal() : HamiltonianSpec::euler_kinetic_dirichlet();
  ctx->bracket = std::make_shared<BracketRhs>(BracketRhs::Kind::CollisionDivGrad,
                                              ctx->entropy, ctx->ham, ctx->mu);
  ctx->record_min_u = gibbs;

  ScalarField u0 = gaussian_profile(ctx->grid, cfg.ic.x0, cfg.ic.y0, cfg.ic.w1, cfg.ic.w2,
                                    cfg.ic.amplitude);
  if (perturbed) {
    ScalarField mode = ScalarField::sample(ctx->grid, [](double x, double y) {
      return std::sin(6.0 * kPi * x) * std::sin(4.0 * kPi * y);
    });
    for (std::size_t i = 0; i < u0.v.size(); ++i) u0.v[i] += mode.v[i];
  }
  ctx->H0 = hamiltonian_value(ctx->ham, u0, ctx->mu);

  ProblemHooks hooks = make_scalar_hooks(ctx);
  hooks.snapshot = scalar_snapshot_writer(cfg, ctx->grid, artifacts);

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, u0.v, cfg.run);
  const auto& recs = result.trajectory.records;

  const ScalarField uT(ctx->grid, result.trajectory.final_state);
  const ScalarField psi = hamiltonian_derivative(ctx->ham, uT, ctx->mu);
  if (gs) {
    ScalarField profile(ctx->grid);
    for (int i = 0; i < ctx->grid.n[0]; ++i) {
      const double r = ctx->grid.coord(0, i);
      for (int j = 0; j < ctx->grid.n[1]; ++j) {
        const std::size_t c = ctx->grid.index(i, j);
        profile.v[c] = uT.v[c] / (C * r * r + D);
      }
    }
    const LinearFit fit = linear_regression(psi, profile, ctx->mu, true);
    result.summary.emplace_back("lambda_regression", fit.slope);
    result.summary.emplace_back("scatter_r2", fit.r2);
    result.summary.emplace_back("equilibrium_residual",
                                gs_equilibrium_residual(uT, ctx->mu, C, D));
  } else if (gibbs) {
    ScalarField logu(ctx->grid);
    double min_u = uT.v[0];
    for (double x : uT.v) min_u = std::min(min_u, x);
    result.summary.emplace_back("min_u_final", min_u);
    if (min_u > 0.0) {
      for (std::size_t i = 0; i < uT.v.size(); ++i) logu.v[i] = 1.0 + std::log(uT.v[i]);
      const LinearFit fit = linear_regression(psi, logu, ctx->mu, false);
      result.summary.emplace_back("lambda_regression", fit.slope);
      result.summary.emplace_back("scatter_r2", fit.r2);
      const double lf = gibbs_lambda_estimate(uT, ctx->H0, ctx->mu);
      result.summary.emplace_back("lambda_formula", lf);
      result.summary.emplace_back("lambda_agreement_rel",
                                  std::abs(fit.slope - lf) / std::abs(lf));
    }
  } else {
    const LinearFit fit = linear_regression(psi, uT, ctx->mu, true);
    result.summary.emplace_back("lambda_regression", fit.slope);
    result.summary.emplace_back("scatter_r2", fit.r2);
    result.summary.emplace_back("equilibrium_residual",
                                euler_equilibrium_residual(uT, ctx->mu));
  }
  result.summary.emplace_back("h_rel_err_max", h_rel_err_max(recs));
  result.summary.emplace_back("entropy_increase_max", entropy_increase_max(recs));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, ctx->record_min_u
                                                  ? std::vector<std::string>{"min_u"}
                                                  : std::vector<std::string>{});
  return result;
}

ExperimentResult run_beltrami(const ExperimentConfig& cfg, bool artifacts) {
  const GridSpec grid = grid_for(cfg);
  const Measure mu = Measure::unit(grid);
  const EntropySpec entropy = EntropySpec::magnetic_energy();
  const HamiltonianSpec ham = HamiltonianSpec::helicity3d();
  VectorField B0 = helical_initial_field(grid, cfg.ic.a, cfg.ic.m, cfg.ic.nmode,
                                         cfg.ic.normalize);
  const double H0 = hamiltonian_value(ham, B0, mu);

  ProblemHooks hooks;
  hooks.rhs = [grid](const State& s) {
    VectorField B(grid, 3);
    B.v = s;
    return rhs_magnetofrictional(B).v;
  };
  hooks.rhs_norm = [grid, mu](const State& r) {
    double acc = 0.0;
    const std::size_t n = grid.size();
    for (int c = 0; c < 3; ++c)
      for (std::size_t i = 0; i < n; ++i) {
        const double x = r[c * n + i];
        acc += x * x * mu.w[i];
      }
    return std::sqrt(acc);
  };
  hooks.record = [grid, mu, entropy, ham, H0](double t, const State& s) {
    VectorField B(grid, 3);
    B.v = s;
    DiagnosticsRecord rec;
    rec.t = t;
    rec.S = entropy_value(entropy, B, mu);
    rec.H = hamiltonian_value(ham, B, mu);
    rec.H_rel_err = (rec.H - H0) / std::abs(H0);
    rec.M = 0.0;
    rec.extras.emplace_back("div_b", spectral_div_residual(B));
    rec.extras.emplace_back("force_residual", beltrami_equilibrium_residual(B));
    return rec;
  };
  hooks.auto_dt = [grid, cap = cfg.run.dt](const State& s) {
    double b2max = 0.0;
    const std::size_t n = grid.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double b2 = s[i] * s[i] + s[n + i] * s[n + i] + s[2 * n + i] * s[2 * n + i];
      b2max = std::max(b2max, b2);
    }
    const double h = grid.spacing(0);
    return std::min(cap, 0.25 * h * h / (b2max + 1e-12));
  };
  if (artifacts) {
    std::filesystem::create_directories(cfg.out_dir);
    const std::string dir = cfg.out_dir;
    hooks.snapshot = [dir, grid](double t, const State& s) {
      VectorField B(grid, 3);
      B.v = s;
      write_field(dir + "/snapshot_t" + fmt_time(t) + ".field", B);
    };
  }

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, B0.v, cfg.run);
  const auto& recs = result.trajectory.records;

  double hdrift = 0.0, div_max = 0.0, rise = 0.0;
  for (std::size_t i = 0; i < recs.size(); ++i) {
    hdrift = std::max(hdrift, std::abs(recs[i].H_rel_err));
    div_max = std::max(div_max, recs[i].extra("div_b"));
    if (i)
      rise = std::max(rise, (recs[i].S - recs[i - 1].S) / std::abs(recs[i - 1].S));
  }
  result.summary.emplace_back("helicity_rel_drift_max", hdrift);
  result.summary.emplace_back("energy_increase_max", rise);
  result.summary.emplace_back("div_b_max", div_max);
  result.summary.emplace_back("initial_residual", recs.front().extra("force_residual"));
  result.summary.emplace_back("final_residual", recs.back().extra("force_residual"));
  result.summary.emplace_back(
      "residual_ratio", recs.back().extra("force_residual") /
                            std::max(recs.front().extra("force_residual"), 1e-300));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, {"div_b", "force_residual"});
  return result;
}

ExperimentResult run_findim(const ExperimentConfig& cfg, bool artifacts) {
  FinDimSystem sys = [&] {
    if (cfg.problem == "findim-ex1")
      return FinDimSystem::example1({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5},
                                    {0.2, -0.4, 0.3, 0.1});
    if (cfg.problem == "findim-ex2")
      return FinDimSystem::example2({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5});
    return FinDimSystem::example3({0.0, 0.0, -2.0}, 3);
  }();
  const State z0 = cfg.problem == "findim-ex1"   ? State{1.0, -0.5, 0.8, 0.3}
                   : cfg.problem == "findim-ex2" ? State{0.8, 0.1, -0.3, 0.2}
                                                 : State{0.6, -0.4, 0.7};
  const double eta = sys.hamiltonian(z0);
  const double S_eta = sys.entropy_floor(eta);
  const double ball_radius = 1.0;
  const double kappa = pl_constant(sys, eta, ball_radius);
  const double H0 = eta;

  ProblemHooks hooks;
  hooks.rhs = [&sys](const State& z) { return sys.rhs(z); };
  hooks.rhs_norm = [](const State& r) {
    double acc = 0.0;
    for (double x : r) acc += x * x;
    return std::sqrt(acc);
  };
  std::vector<double> hist_t;
  std::vector<State> hist;
  hooks.record = [&](double t, const State& z) {
    DiagnosticsRecord rec;
    rec.t = t;
    rec.S = sys.entropy(z);
    rec.H = sys.hamiltonian(z);
    rec.H_rel_err = H0 != 0.0 ? (rec.H - H0) / std::abs(H0) : rec.H - H0;
    rec.M = 0.0;
    hist_t.push_back(t);
    hist.push_back(z);
    return rec;
  };

  ExperimentResult result;
  result.config = cfg;
  result.trajectory = run(hooks, z0, cfg.run);
  const auto& recs = result.trajectory.records;

  const State z_eta = sys.equilibrium(eta);
  auto dist = [&](const State& z) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i)
      d2 += (z[i] - z_eta[i]) * (z[i] - z_eta[i]);
    return std::sqrt(d2);
  };

  // Entropy-excess bound S - S_eta <= (S0 - S_eta) exp(-kappa t) (1 + 1e-6),
  // checked while the bound is still resolvable in double precision.
  double excess_ratio_max = 0.0;
  const double excess0 = recs.front().S - S_eta;
  const double resolvable = 1e-12 * std::max({std::abs(recs.front().S), std::abs(S_eta), 1.0});
  for (const auto& r : recs) {
    const double bound = excess0 * std::exp(-kappa * r.t);
    if (r.t > 0.0 && bound > resolvable)
      excess_ratio_max = std::max(excess_ratio_max, (r.S - S_eta) / bound);
  }
  result.summary.emplace_back("entropy_excess_ratio_max", excess_ratio_max);
  result.summary.emplace_back("kappa_eta", kappa);
  result.summary.emplace_back("s_eta", S_eta);
  result.summary.emplace_back("final_distance", dist(result.trajectory.final_state));

  if (cfg.problem == "findim-ex1") {
    double cf_err = 0.0, conv_ratio_max = 0.0;
    const double K1 = sys.k1();
    const double d0 = dist(z0);
    for (std::size_t k = 0; k < hist.size(); ++k) {
      const State ref = analytic_solution_example1(sys, z0, hist_t[k]);
      double d = 0.0;
      for (std::size_t i = 0; i < ref.size(); ++i)
        d = std::max(d, std::abs(ref[i] - hist[k][i]));
      cf_err = std::max(cf_err, d);
      if (hist_t[k] > 0.0)
        conv_ratio_max = std::max(
            conv_ratio_max, dist(hist[k]) / (d0 * std::exp(-K1 * hist_t[k]) + 1e-300));
    }
    result.summary.emplace_back("closed_form_max_err", cf_err);
    result.summary.emplace_back("convergence_ratio_max", conv_ratio_max);
  }
  {
    const PlReport rep = check_pl_inequality(sys, eta, 1000, 777, ball_radius);
    result.summary.emplace_back("pl_min_margin", rep.min_margin);
    result.summary.emplace_back("pl_satisfied", rep.satisfied ? 1.0 : 0.0);
  }
  result.summary.emplace_back("h_rel_err_max", h_rel_err_max(recs));
  result.summary.emplace_back("entropy_increase_max", entropy_increase_max(recs));
  result.exit_code = result.trajectory.failed ? 1 : 0;
  if (artifacts) write_artifacts(cfg, result, {});
  return result;
}

} // namespace

ExperimentResult run_experiment(const ExperimentConfig& cfg, bool write_artifacts_flag) {
  const std::string& p = cfg.problem;
  if (!is_preset(p)) throw std::invalid_argument("unknown problem '" + p + "'");
  if (p == "heat1d") return run_heat(cfg, write_artifacts_flag);
  if (p == "advection-double") return run_advection(cfg, false, write_artifacts_flag);
  if (p == "advection-projector") return run_advection(cfg, true, write_artifacts_flag);
  if (p == "euler-double") return run_euler_periodic(cfg, false, write_artifacts_flag);
  if (p == "euler-projector") return run_euler_periodic(cfg, true, write_artifacts_flag);
  if (p == "euler-collision-quadratic" || p == "euler-collision-gibbs" ||
      p == "euler-perturbed-collision" || p == "gs-collision")
    return run_collision(cfg, write_artifacts_flag);
  if (p == "beltrami3d") return run_beltrami(cfg, write_artifacts_flag);
  return run_findim(cfg, write_artifacts_flag);
}

} // namespace metrix
