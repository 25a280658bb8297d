#include <doctest.h>

#include <cmath>

#include "metrix/elliptic.hpp"
#include "metrix/operators.hpp"
#include "support/testing.hpp"

using namespace metrix;

namespace {
constexpr double kPi = 3.14159265358979323846;

// independent stencil oracle: 5-point Laplacian on interior nodes
ScalarField five_point_laplacian(const ScalarField& f) {
  const GridSpec& g = f.grid;
  const double h1 = g.spacing(0), h2 = g.spacing(1);
  ScalarField out(g);
  for (int i = 1; i < g.n[0] - 1; ++i)
    for (int j = 1; j < g.n[1] - 1; ++j)
      out.v[g.index(i, j)] =
          (f.v[g.index(i + 1, j)] - 2.0 * f.v[g.index(i, j)] + f.v[g.index(i - 1, j)]) /
              (h1 * h1) +
          (f.v[g.index(i, j + 1)] - 2.0 * f.v[g.index(i, j)] + f.v[g.index(i, j - 1)]) /
              (h2 * h2);
  return out;
}

} // namespace

TEST_CASE("poisson_periodic: eigenfunction, constants, spectral residual") {
  const GridSpec g = GridSpec::torus2d(32);
  {
    ScalarField w = ScalarField::sample(g, [](double x, double) { return std::cos(x); });
    const ScalarField phi = poisson_periodic(w);
    for (std::size_t i = 0; i < w.v.size(); ++i)
      CHECK(phi.v[i] == doctest::Approx(w.v[i]).epsilon(1e-12));
  }
  {
    ScalarField w(g);
    w.v.assign(w.v.size(), 4.2);
    const ScalarField phi = poisson_periodic(w);
    for (double x : phi.v) CHECK(std::abs(x) < 1e-13);
  }
  {
    // residual -lap phi - (w - mean w) via the spectral derivative oracle
    const ScalarField w = testing::random_smooth_field(g, 7);
    const ScalarField phi = poisson_periodic(w);
    const Measure mu = Measure::unit(g);
    const VectorField gp = gradient(phi);
    ScalarField lap(g);
    {
      ScalarField p1(g), p2(g);
      std::copy(gp.comp(0), gp.comp(0) + g.size(), p1.v.begin());
      std::copy(gp.comp(1), gp.comp(1) + g.size(), p2.v.begin());
      const ScalarField d1 = derivative(p1, 0);
      const ScalarField d2 = derivative(p2, 1);
      for (std::size_t i = 0; i < lap.v.size(); ++i) lap.v[i] = d1.v[i] + d2.v[i];
    }
    const double wbar = domain_mean(w, mu);
    double res2 = 0.0, scale2 = 0.0;
    for (std::size_t i = 0; i < w.v.size(); ++i) {
      const double r = -lap.v[i] - (w.v[i] - wbar);
      res2 += r * r;
      scale2 += (w.v[i] - wbar) * (w.v[i] - wbar);
    }
    CHECK(std::sqrt(res2) <= 1e-12 * std::sqrt(scale2));
  }
}

TEST_CASE("poisson_dirichlet: sine eigenfunction and stencil residual") {
  const GridSpec g = GridSpec::dirichlet_rect2d(64, 64);
  {
    ScalarField w = ScalarField::sample(
        g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
    const ScalarField phi = poisson_dirichlet(w);
    // continuum eigenvalue 2 pi^2; discrete eigenvalue matches to O(h^2)
    const double lam = 2.0 * kPi * kPi;
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        CHECK(phi.v[g.index(i, j)] ==
              doctest::Approx(w.v[g.index(i, j)] / lam).epsilon(2e-3));
  }
  {
    ScalarField zero(g);
    const ScalarField phi = poisson_dirichlet(zero);
    for (double x : phi.v) CHECK(x == 0.0);
  }
  {
    const ScalarField w = testing::random_field(g, 99);
    const ScalarField phi = poisson_dirichlet(w);
    // boundary values are exactly zero
    for (int i = 0; i < g.n[0]; ++i) {
      CHECK(phi.v[g.index(i, 0)] == 0.0);
      CHECK(phi.v[g.index(i, g.n[1] - 1)] == 0.0);
    }
    const ScalarField lap = five_point_laplacian(phi);
    double worst = 0.0, scale = 0.0;
    for (int i = 1; i < g.n[0] - 1; ++i)
      for (int j = 1; j < g.n[1] - 1; ++j) {
        worst = std::max(worst,
                         std::abs(-lap.v[g.index(i, j)] - w.v[g.index(i, j)]));
        scale = std::max(scale, std::abs(w.v[g.index(i, j)]));
      }
    CHECK(worst <= 1e-10 * scale);
  }
}

TEST_CASE("gs_apply: r^2 is in the kernel; gs_solve: trivial and manufactured") {
  {
    const GridSpec g = GridSpec::gs_rect2d(32, 32);
    ScalarField psi = ScalarField::sample(g, [](double r, double) { return r * r; });
    const ScalarField out = gs_apply(psi);
    for (int i = 1; i < g.n[0] - 1; ++i)
      for (int j = 1; j < g.n[1] - 1; ++j)
        CHECK(std::abs(out.v[g.index(i, j)]) < 1e-10);
  }
  {
    const GridSpec g = GridSpec::gs_rect2d(32, 32);
    ScalarField zero(g);
    const ScalarField psi = gs_solve(zero);
    for (double x : psi.v) CHECK(x == 0.0);
  }
  {
    // manufactured solution; error contraction ~4x under grid doubling
    auto manufactured_error = [](int n) {
      const GridSpec g = GridSpec::gs_rect2d(n, n);
      const Measure mu = Measure::inverse_r(g);
      ScalarField psi_m = ScalarField::sample(g, [](double r, double z) {
        return std::sin(kPi * (r - 1.0) / 6.0) * std::sin(kPi * (z + 9.5) / 19.0);
      });
      // -Delta* psi_m = (a^2 + b^2) psi_m + (1/r) a cos(a(r-1)) sin(b(z+9.5))
      const double a = kPi / 6.0, b = kPi / 19.0;
      ScalarField rhs = ScalarField::sample(g, [&](double r, double z) {
        const double s = std::sin(a * (r - 1.0)) * std::sin(b * (z + 9.5));
        const double c = std::cos(a * (r - 1.0)) * std::sin(b * (z + 9.5));
        return (a * a + b * b) * s + (a / r) * c;
      });
      const ScalarField psi = gs_solve(rhs, 1e-12);
      ScalarField diff(g);
      for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] = psi.v[i] - psi_m.v[i];
      return norm_l2(diff, mu);
    };
    const double e1 = manufactured_error(33);
    const double e2 = manufactured_error(65);
    CHECK(e1 / e2 > 3.0);
    CHECK(e1 / e2 < 5.5);
    CHECK(e1 < 2e-3);
  }
}

TEST_CASE("gs_solve residual meets the requested tolerance") {
  const GridSpec g = GridSpec::gs_rect2d(24, 24);
  const ScalarField u = testing::random_field(g, 3);
  const ScalarField psi = gs_solve(u, 1e-10);
  const ScalarField back = gs_apply(psi);
  double res2 = 0.0, rhs2 = 0.0;
  for (int i = 1; i < g.n[0] - 1; ++i)
    for (int j = 1; j < g.n[1] - 1; ++j) {
      const std::size_t c = g.index(i, j);
      const double r = -back.v[c] - u.v[c];
      res2 += r * r;
      rhs2 += u.v[c] * u.v[c];
    }
  CHECK(std::sqrt(res2) <= 2e-9 * std::sqrt(rhs2));
}
