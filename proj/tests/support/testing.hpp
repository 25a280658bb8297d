#pragma once

// Shared helpers for the test suites: deterministic random fields and the
// independent oracles the expected values are computed with.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "metrix/functionals.hpp"
#include "metrix/grid.hpp"
#include "metrix/operators.hpp"

namespace metrix::testing {

inline ScalarField random_field(const GridSpec& g, std::uint64_t seed, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, amp);
  ScalarField f(g);
  for (double& x : f.v) x = gauss(rng);
  return f;
}

// Smooth random periodic field from a handful of low modes.
inline ScalarField random_smooth_field(const GridSpec& g, std::uint64_t seed,
                                       int max_mode = 4, double amp = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<double> a, b, c;
  struct Mode {
    int k1, k2;
    double ac, as;
  };
  std::vector<Mode> modes;
  for (int k1 = 0; k1 <= max_mode; ++k1)
    for (int k2 = -max_mode; k2 <= max_mode; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      modes.push_back({k1, k2, amp * unif(rng), amp * unif(rng)});
    }
  const double L1 = g.length(0), L2 = g.dim > 1 ? g.length(1) : 1.0;
  ScalarField f(g);
  for (int i = 0; i < g.n[0]; ++i) {
    const double x1 = g.coord(0, i);
    for (int j = 0; j < (g.dim > 1 ? g.n[1] : 1); ++j) {
      const double x2 = g.dim > 1 ? g.coord(1, j) : 0.0;
      double v = 0.0;
      for (const auto& m : modes) {
        const double phase =
            2.0 * 3.14159265358979323846 * (m.k1 * x1 / L1 + m.k2 * x2 / L2);
        v += m.ac * std::cos(phase) + m.as * std::sin(phase);
      }
      f.v[g.dim > 1 ? g.index(i, j) : static_cast<std::size_t>(i)] = v;
    }
  }
  return f;
}

// Strictly positive smooth field (for the Gibbs entropy).
inline ScalarField random_positive_field(const GridSpec& g, std::uint64_t seed,
                                         double base = 1.5) {
  ScalarField f = random_smooth_field(g, seed, 3, 1.0);
  double peak = 0.0;
  for (double x : f.v) peak = std::max(peak, std::abs(x));
  const double scale = peak > 0.0 ? 0.3 * base / peak : 0.0;
  for (double& x : f.v) x = base + scale * x;
  return f;
}

// Band-limited random solenoidal mean-free field on torus3d, built as the
// curl of a random smooth potential.
inline VectorField random_solenoidal_field(const GridSpec& g, std::uint64_t seed,
                                           int max_mode = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  VectorField A(g, 3);
  const double two_pi = 6.283185307179586476925286766559;
  struct Mode {
    int k1, k2, k3, comp;
    double ac, as;
  };
  std::vector<Mode> modes;
  for (int c = 0; c < 3; ++c)
    for (int k1 = -max_mode; k1 <= max_mode; ++k1)
      for (int k2 = -max_mode; k2 <= max_mode; ++k2)
        for (int k3 = -max_mode; k3 <= max_mode; ++k3) {
          if (k1 == 0 && k2 == 0 && k3 == 0) continue;
          modes.push_back({k1, k2, k3, c, unif(rng), unif(rng)});
        }
  for (int i = 0; i < g.n[0]; ++i)
    for (int j = 0; j < g.n[1]; ++j)
      for (int k = 0; k < g.n[2]; ++k) {
        const std::size_t idx = g.index(i, j, k);
        const double x1 = g.coord(0, i), x2 = g.coord(1, j), x3 = g.coord(2, k);
        for (const auto& m : modes) {
          const double phase = two_pi * (m.k1 * x1 + m.k2 * x2 + m.k3 * x3);
          A.comp(m.comp)[idx] += m.ac * std::cos(phase) + m.as * std::sin(phase);
        }
      }
  return curl3d(A);
}

// Central finite-difference directional derivative of a functional.
template <class ValueFn>
double directional_derivative(ValueFn value, const std::vector<double>& u,
                              const std::vector<double>& v, double eps) {
  std::vector<double> up = u, um = u;
  for (std::size_t i = 0; i < u.size(); ++i) {
    up[i] += eps * v[i];
    um[i] -= eps * v[i];
  }
  return (value(up) - value(um)) / (2.0 * eps);
}

} // namespace metrix::testing
