#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "metrix/grid.hpp"

namespace metrix {

/// One diagnostics row. Extras are named problem-specific scalars kept in
/// a stable (insertion) order.
struct DiagnosticsRecord {
  double t = 0.0;
  double S = 0.0;
  double H = 0.0;
  double H_rel_err = 0.0;
  double M = 0.0;
  double rhs_norm = 0.0;
  std::vector<std::pair<std::string, double>> extras;

  double extra(const std::string& key) const;
};

/// Node-wise (a_i, b_i) pairs, optionally subsampled with a fixed stride.
std::vector<std::pair<double, double>> scatter_pairs(const ScalarField& a,
                                                     const ScalarField& b,
                                                     int stride = 1);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// mu-weighted least squares b ~ slope * a + intercept; R^2 = 1 - SSres/SStot.
LinearFit linear_regression(const ScalarField& a, const ScalarField& b, const Measure& mu,
                            bool through_origin = false);

struct RateFit {
  double rate = 0.0;       // decay rate (positive for decay)
  int window_begin = 0;    // record index range of the accepted fit window
  int window_end = 0;      // exclusive
  double residual = 0.0;   // rms residual of the linear fit in log space
};

/// Least-squares slope of log(values - floor) over the largest window whose
/// linear-fit rms residual is <= 0.05. Tail records within 3x of the final
/// floor gap are excluded. Throws if no valid window exists.
RateFit fit_exponential_rate(const std::vector<double>& times,
                             const std::vector<double>& values, double floor);

struct ConeReport {
  int checked = 0;
  int violations = 0;
  double worst_margin = 0.0; // most negative inequality margin observed
  double max_shrink = 0.0;   // largest a in (0,1] satisfied by every record
};

/// Per-record checks S >= H0, |phi|^2 <= 2 H0, and 2S - 4 H0^2/|phi|^2 >= 0
/// for periodic vorticity runs carrying the "phi_l2sq" extra.
ConeReport cone_check(const std::vector<DiagnosticsRecord>& records, double H0,
                      double S_eta);

struct PhaseFit {
  double theta0 = 0.0, theta1 = 0.0, theta2 = 0.0;
  double error = 0.0; // L2 distance to the fitted reference profile
};

/// Best fit of the lowest-eigenvalue relaxed profile
///   (sqrt(H0)/pi) [cos(t0) cos(x1+t1) + sin(t0) cos(x2+t2)]
/// from the four lowest Fourier coefficients of omega (torus2d).
PhaseFit best_fit_phases(const ScalarField& omega, double H0);

/// mu-weighted average of u0 over connected components of the n_bins
/// interlevel bands of h (4-neighbor flood fill, periodic wrap on tori).
ScalarField contour_average_oracle(const ScalarField& u0, const ScalarField& h,
                                   int n_bins, const Measure& mu);

/// Normalized equilibrium defects.
/// Euler: |[omega,phi]| / (|grad omega| |grad phi|) with phi from the grid's
/// Poisson solve. Grad-Shafranov: relative residual of the regression
/// u/(C r^2 + D) ~ lambda psi. Beltrami: |(curl B) x B| / |B|^2.
double euler_equilibrium_residual(const ScalarField& u, const Measure& mu);
double gs_equilibrium_residual(const ScalarField& u, const Measure& mu, double C, double D);
double beltrami_equilibrium_residual(const VectorField& B);

/// Lagrange-multiplier estimate (M(omega) + S(omega)) / (2 H0) for the
/// Gibbs-entropy relaxed state (requires omega > 0 and H0 != 0).
double gibbs_lambda_estimate(const ScalarField& omega, double H0, const Measure& mu);

} // namespace metrix
