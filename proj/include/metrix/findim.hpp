#pragma once

#include <cstdint>
#include <vector>

namespace metrix {

/// Finite-dimensional metric systems dz/dt = -K(z) grad S(z) with a conserved
/// H, analytic equilibria, and closed-form decay constants.
struct FinDimSystem {
  enum class Kind {
    Example1, // H = h.z, S = s.z + |z|^2/2, constant K with K h = 0
    Example2, // same bracket, S = |z|^2 / (1 + |z|^2)
    Example3, // K(z) = |z|^2 I - z (x) z, H = |z|^2/2, S = s.z on {z.s < 0}
  };

  Kind kind;
  int n = 0;
  std::vector<double> K; // n x n, row-major (examples 1 and 2)
  std::vector<double> h; // |h| = 1 (examples 1 and 2)
  std::vector<double> s; // examples 1 and 3

  /// K given in an eigenbasis whose first vector is h; kvals[0] must be 0.
  static FinDimSystem example1(const std::vector<double>& kvals, std::vector<double> h,
                               std::vector<double> s);
  static FinDimSystem example2(const std::vector<double>& kvals, std::vector<double> h);
  static FinDimSystem example3(std::vector<double> s, int n);

  std::vector<double> rhs(const std::vector<double>& z) const;
  std::vector<double> grad_entropy(const std::vector<double>& z) const;
  double entropy(const std::vector<double>& z) const;
  double hamiltonian(const std::vector<double>& z) const;
  /// Smallest nonzero eigenvalue of the constant K (examples 1 and 2).
  double k1() const;
  /// Lagrange-condition equilibrium on the level set I(z) = eta.
  std::vector<double> equilibrium(double eta) const;
  double entropy_floor(double eta) const;
};

/// Closed-form orbit of example 1 (sigma = identity, |h| = 1).
std::vector<double> analytic_solution_example1(const FinDimSystem& sys,
                                               const std::vector<double>& z0, double t);

/// Closed-form PL' constant kappa_eta per system kind.
/// `ball_radius` enters only for example 2.
double pl_constant(const FinDimSystem& sys, double eta, double ball_radius = 1.0);

struct PlReport {
  int samples = 0;
  double min_margin = 0.0;   // min of grad S . K grad S - kappa (S - S_eta)
  double scale = 0.0;        // magnitude reference for the margin
  bool satisfied = false;    // min_margin >= -1e-10 * scale
};

/// Evaluates the PL' inequality on random samples of the level set
/// I(z) = eta. For example 2 the constant uses `ball_radius`, and samples
/// outside that ball may legitimately violate the inequality.
PlReport check_pl_inequality(const FinDimSystem& sys, double eta, int n_samples,
                             std::uint64_t seed, double ball_radius = 1.0);

/// Pointwise PL' margin grad S . K grad S - kappa (S - S_eta) at z,
/// with eta taken from the invariant at z.
double pl_margin(const FinDimSystem& sys, const std::vector<double>& z, double kappa);

} // namespace metrix
