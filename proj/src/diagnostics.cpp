#include "metrix/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <stdexcept>

#include "metrix/brackets.hpp"
#include "metrix/elliptic.hpp"
#include "metrix/operators.hpp"

namespace metrix {

double DiagnosticsRecord::extra(const std::string& key) const {
  for (const auto& [k, v] : extras)
    if (k == key) return v;
  throw std::out_of_range("diagnostics record has no extra named " + key);
}

std::vector<std::pair<double, double>> scatter_pairs(const ScalarField& a,
                                                     const ScalarField& b, int stride) {
  require_same_grid(a.grid, b.grid, "scatter_pairs");
  if (stride < 1) throw std::invalid_argument("scatter_pairs: stride must be >= 1");
  std::vector<std::pair<double, double>> out;
  out.reserve(a.v.size() / stride + 1);
  for (std::size_t i = 0; i < a.v.size(); i += static_cast<std::size_t>(stride))
    out.emplace_back(a.v[i], b.v[i]);
  return out;
}

LinearFit linear_regression(const ScalarField& a, const ScalarField& b, const Measure& mu,
                            bool through_origin) {
  require_same_grid(a.grid, b.grid, "linear_regression");
  require_same_grid(a.grid, mu.grid, "linear_regression");
  double sw = 0, swa = 0, swb = 0, swaa = 0, swab = 0, swbb = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double w = mu.w[i], x = a.v[i], y = b.v[i];
    sw += w;
    swa += w * x;
    swb += w * y;
    swaa += w * x * x;
    swab += w * x * y;
    swbb += w * y * y;
  }
  LinearFit fit;
  if (through_origin) {
    if (swaa == 0.0) throw std::domain_error("linear_regression: zero predictor");
    fit.slope = swab / swaa;
    fit.intercept = 0.0;
  } else {
    const double det = sw * swaa - swa * swa;
    if (det == 0.0) throw std::domain_error("linear_regression: degenerate predictor");
    fit.slope = (sw * swab - swa * swb) / det;
    fit.intercept = (swb - fit.slope * swa) / sw;
  }
  const double mean_b = swb / sw;
  double ss_res = 0, ss_tot = 0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double w = mu.w[i];
    const double pred = fit.slope * a.v[i] + fit.intercept;
    ss_res += w * (b.v[i] - pred) * (b.v[i] - pred);
    ss_tot += w * (b.v[i] - mean_b) * (b.v[i] - mean_b);
  }
  fit.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

RateFit fit_exponential_rate(const std::vector<double>& times,
                             const std::vector<double>& values, double floor) {
  if (times.size() != values.size()) throw std::invalid_argument("times/values mismatch");
  const int n = static_cast<int>(times.size());
  const double tail_gap = n > 0 ? values.back() - floor : 0.0;
  // longest contiguous run of usable records
  int best_begin = 0, best_len = 0, run_begin = -1;
  for (int i = 0; i <= n; ++i) {
    const bool ok = i < n && values[i] - floor > std::max(3.0 * tail_gap, 0.0) &&
                    values[i] - floor > 0.0;
    if (ok && run_begin < 0) run_begin = i;
    if (!ok && run_begin >= 0) {
      if (i - run_begin > best_len) {
        best_len = i - run_begin;
        best_begin = run_begin;
      }
      run_begin = -1;
    }
  }
  constexpr int kMinWindow = 5;
  if (best_len < kMinWindow)
    throw std::domain_error("fit_exponential_rate: no usable window above the floor");

  std::vector<double> t(best_len), y(best_len);
  for (int i = 0; i < best_len; ++i) {
    t[i] = times[best_begin + i];
    y[i] = std::log(values[best_begin + i] - floor);
  }
  // prefix sums for O(1) windowed fits
  std::vector<double> st(best_len + 1, 0), stt(best_len + 1, 0), sy(best_len + 1, 0),
      sty(best_len + 1, 0), syy(best_len + 1, 0);
  for (int i = 0; i < best_len; ++i) {
    st[i + 1] = st[i] + t[i];
    stt[i + 1] = stt[i] + t[i] * t[i];
    sy[i + 1] = sy[i] + y[i];
    sty[i + 1] = sty[i] + t[i] * y[i];
    syy[i + 1] = syy[i] + y[i] * y[i];
  }
  auto window_fit = [&](int b, int e, double& slope, double& rms) {
    const double m = e - b;
    const double St = st[e] - st[b], Stt = stt[e] - stt[b];
    const double Sy = sy[e] - sy[b], Sty = sty[e] - sty[b], Syy = syy[e] - syy[b];
    const double det = m * Stt - St * St;
    if (det <= 0.0) return false;
    slope = (m * Sty - St * Sy) / det;
    const double icept = (Sy - slope * St) / m;
    const double ss = Syy - 2.0 * slope * Sty - 2.0 * icept * Sy + slope * slope * Stt +
                      2.0 * slope * icept * St + icept * icept * m;
    rms = std::sqrt(std::max(ss, 0.0) / m);
    return true;
  };
  for (int len = best_len; len >= kMinWindow; --len) {
    for (int b = 0; b + len <= best_len; ++b) {
      double slope = 0.0, rms = 0.0;
      if (!window_fit(b, b + len, slope, rms)) continue;
      if (rms <= 0.05) {
        RateFit out;
        out.rate = -slope;
        out.window_begin = best_begin + b;
        out.window_end = best_begin + b + len;
        out.residual = rms;
        return out;
      }
    }
  }
  throw std::domain_error("fit_exponential_rate: no window satisfies the fit residual bound");
}

ConeReport cone_check(const std::vector<DiagnosticsRecord>& records, double H0,
                      double S_eta) {
  ConeReport rep;
  rep.max_shrink = 1.0;
  double scale = std::abs(H0);
  for (const auto& r : records) scale = std::max(scale, std::abs(r.S));
  const double tol = 1e-8 * std::max(scale, 1e-300);
  for (const auto& r : records) {
    const double phi2 = r.extra("phi_l2sq");
    ++rep.checked;
    const double m1 = r.S - H0;
    const double m2 = 2.0 * H0 - phi2;
    const double m3 = phi2 > 0.0 ? 2.0 * r.S - 4.0 * H0 * H0 / phi2 : 0.0;
    const double worst = std::min({m1, m2, m3});
    rep.worst_margin = std::min(rep.worst_margin, worst);
    if (worst < -tol) ++rep.violations;
    const double excess = r.S - S_eta;
    if (excess > tol && phi2 > 0.0) {
      const double a = 1.0 - (1.0 / phi2 - 1.0 / (2.0 * H0)) * 2.0 * H0 * H0 / excess;
      rep.max_shrink = std::min(rep.max_shrink, std::clamp(a, 0.0, 1.0));
    }
  }
  return rep;
}

PhaseFit best_fit_phases(const ScalarField& omega, double H0) {
  if (omega.grid.kind != GridKind::Torus2D)
    throw std::invalid_argument("best_fit_phases: torus2d required");
  if (!(H0 > 0.0)) throw std::invalid_argument("best_fit_phases: H0 must be positive");
  const GridSpec& g = omega.grid;
  const Measure mu = Measure::unit(g);
  double c1 = 0, s1 = 0, c2 = 0, s2 = 0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double x1 = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double x2 = g.coord(1, j);
      const double wv = omega.v[g.index(i, j)] * mu.w[g.index(i, j)];
      c1 += wv * std::cos(x1);
      s1 += wv * std::sin(x1);
      c2 += wv * std::cos(x2);
      s2 += wv * std::sin(x2);
    }
  }
  const double pi = 3.14159265358979323846;
  const double half_norm = 2.0 * pi * pi; // ||cos x||^2 on the torus
  c1 /= half_norm;
  s1 /= half_norm;
  c2 /= half_norm;
  s2 /= half_norm;
  const double A1 = std::hypot(c1, s1);
  const double A2 = std::hypot(c2, s2);
  const double rms = norm_l2(omega, mu);
  if (std::hypot(A1, A2) * 2.0 * pi < 1e-12 * std::max(rms, 1e-300))
    throw std::domain_error("best_fit_phases: no lowest-mode content to fit");
  PhaseFit fit;
  fit.theta1 = std::atan2(-s1, c1);
  fit.theta2 = std::atan2(-s2, c2);
  fit.theta0 = std::atan2(A2, A1);
  const double amp = std::sqrt(H0) / pi;
  const double a1 = amp * std::cos(fit.theta0);
  const double a2 = amp * std::sin(fit.theta0);
  double err2 = 0.0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double x1 = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double x2 = g.coord(1, j);
      const double ref = a1 * std::cos(x1 + fit.theta1) + a2 * std::cos(x2 + fit.theta2);
      const double d = omega.v[g.index(i, j)] - ref;
      err2 += d * d * mu.w[g.index(i, j)];
    }
  }
  fit.error = std::sqrt(err2);
  return fit;
}

ScalarField contour_average_oracle(const ScalarField& u0, const ScalarField& h, int n_bins,
                                   const Measure& mu) {
  require_same_grid(u0.grid, h.grid, "contour_average_oracle");
  require_same_grid(u0.grid, mu.grid, "contour_average_oracle");
  if (n_bins < 2) throw std::invalid_argument("contour_average_oracle: n_bins must be >= 2");
  const GridSpec& g = u0.grid;
  if (g.dim != 2) throw std::invalid_argument("contour_average_oracle: 2d grid required");

  double hmin = h.v[0], hmax = h.v[0];
  for (double x : h.v) {
    hmin = std::min(hmin, x);
    hmax = std::max(hmax, x);
  }
  const double width = hmax > hmin ? (hmax - hmin) : 1.0;
  auto band = [&](std::size_t idx) {
    int b = static_cast<int>((h.v[idx] - hmin) / width * n_bins);
    return std::clamp(b, 0, n_bins - 1);
  };

  const int n1 = g.n[0], n2 = g.n[1];
  const bool wrap = g.periodic();
  std::vector<int> label(g.size(), -1);
  int n_comp = 0;
  std::deque<std::pair<int, int>> queue;
  for (int i0 = 0; i0 < n1; ++i0)
    for (int j0 = 0; j0 < n2; ++j0) {
      if (label[g.index(i0, j0)] >= 0) continue;
      const int comp = n_comp++;
      const int b0 = band(g.index(i0, j0));
      label[g.index(i0, j0)] = comp;
      queue.emplace_back(i0, j0);
      while (!queue.empty()) {
        auto [i, j] = queue.front();
        queue.pop_front();
        const std::array<std::array<int, 2>, 4> nbrs{{{i - 1, j}, {i + 1, j}, {i, j - 1}, {i, j + 1}}};
        for (auto [ii, jj] : nbrs) {
          if (wrap) {
            ii = (ii + n1) % n1;
            jj = (jj + n2) % n2;
          } else if (ii < 0 || ii >= n1 || jj < 0 || jj >= n2) {
            continue;
          }
          const std::size_t nidx = g.index(ii, jj);
          if (label[nidx] >= 0 || band(nidx) != b0) continue;
          label[nidx] = comp;
          queue.emplace_back(ii, jj);
        }
      }
    }

  std::vector<double> wsum(n_comp, 0.0), uwsum(n_comp, 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    wsum[label[idx]] += mu.w[idx];
    uwsum[label[idx]] += mu.w[idx] * u0.v[idx];
  }
  ScalarField out(g);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    out.v[idx] = uwsum[label[idx]] / wsum[label[idx]];
  return out;
}

double euler_equilibrium_residual(const ScalarField& u, const Measure& mu) {
  const GridSpec& g = u.grid;
  ScalarField phi = g.kind == GridKind::Torus2D ? poisson_periodic(u) : poisson_dirichlet(u);
  const VectorField gw = gradient(u);
  const VectorField gp = gradient(phi);
  ScalarField pb(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    pb.v[i] = gw.comp(0)[i] * gp.comp(1)[i] - gw.comp(1)[i] * gp.comp(0)[i];
  const double den = norm_l2(gw, mu) * norm_l2(gp, mu);
  if (den == 0.0) return 0.0;
  return norm_l2(pb, mu) / den;
}

double gs_equilibrium_residual(const ScalarField& u, const Measure& mu, double C, double D) {
  const GridSpec& g = u.grid;
  ScalarField psi = gs_solve(u, 1e-12);
  ScalarField profile(g);
  for (int i = 0; i < g.n[0]; ++i) {
    const double r = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j)
      profile.v[g.index(i, j)] = u.v[g.index(i, j)] / (C * r * r + D);
  }
  const LinearFit fit = linear_regression(psi, profile, mu, true);
  ScalarField resid(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    resid.v[i] = profile.v[i] - fit.slope * psi.v[i];
  const double den = norm_l2(profile, mu);
  return den > 0.0 ? norm_l2(resid, mu) / den : 0.0;
}

double beltrami_equilibrium_residual(const VectorField& B) {
  const Measure mu = Measure::unit(B.grid);
  const double b2 = inner(B, B, mu);
  if (b2 == 0.0) return 0.0;
  return norm_l2(magnetofrictional_velocity(B), mu) / b2;
}

double gibbs_lambda_estimate(const ScalarField& omega, double H0, const Measure& mu) {
  for (std::size_t i = 0; i < omega.v.size(); ++i)
    if (!(omega.v[i] > 0.0))
      throw std::domain_error("gibbs_lambda_estimate: omega must be positive");
  if (H0 == 0.0) throw std::domain_error("gibbs_lambda_estimate: degenerate H0 = 0");
  ScalarField slog(omega.grid);
  for (std::size_t i = 0; i < omega.v.size(); ++i)
    slog.v[i] = omega.v[i] * std::log(omega.v[i]);
  const double M = integrate(omega, mu);
  const double S = integrate(slog, mu);
  return (M + S) / (2.0 * H0);
}

} // namespace metrix
