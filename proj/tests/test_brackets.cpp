#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "metrix/brackets.hpp"
#include "metrix/elliptic.hpp"
#include "metrix/experiment.hpp"
#include "metrix/operators.hpp"
#include "support/testing.hpp"

using namespace metrix;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Naive O(n^2) DFT derivative along one axis of a periodic 2d field; an
// independent oracle for the spectral differentiation used in production.
ScalarField naive_derivative(const ScalarField& f, int axis) {
  const GridSpec& g = f.grid;
  const int n = g.n[axis];
  const double L = g.length(axis);
  ScalarField out(g);
  const std::complex<double> I(0.0, 1.0);
  const int other = 1 - axis;
  for (int o = 0; o < g.n[other]; ++o) {
    std::vector<std::complex<double>> coef(n, 0.0);
    for (int k = 0; k < n; ++k) {
      std::complex<double> acc = 0.0;
      for (int j = 0; j < n; ++j) {
        const std::size_t idx = axis == 0 ? g.index(j, o) : g.index(o, j);
        acc += f.v[idx] * std::exp(-I * (2.0 * kPi * double(k) * double(j) / double(n)));
      }
      coef[k] = acc / double(n);
    }
    for (int j = 0; j < n; ++j) {
      std::complex<double> acc = 0.0;
      for (int k = 0; k < n; ++k) {
        int kk = k <= n / 2 ? k : k - n;
        if (n % 2 == 0 && k == n / 2) kk = 0; // match the Nyquist convention
        const double wave = 2.0 * kPi * kk / L;
        acc += I * wave * coef[k] *
               std::exp(I * (2.0 * kPi * double(k) * double(j) / double(n)));
      }
      const std::size_t idx = axis == 0 ? g.index(j, o) : g.index(o, j);
      out.v[idx] = acc.real();
    }
  }
  return out;
}

// Direct O(N^2) double-sum quadrature of the collision flux divergence.
ScalarField collision_rhs_brute_force(const BracketRhs& b, const ScalarField& u) {
  const GridSpec& g = u.grid;
  const Measure& mu = b.mu;
  const ScalarField psi = hamiltonian_derivative(b.hamiltonian, u, mu);
  const VectorField a = gradient(psi);
  const VectorField du = gradient(u);
  const MFunction mf = m_function(b.entropy, g);
  const std::size_t n = g.size();
  std::vector<double> M(n), w1(n), w2(n);
  for (int i = 0; i < g.n[0]; ++i) {
    const double r = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const std::size_t c = g.index(i, j);
      M[c] = mf.M(r, u.v[c]);
      w1[c] = du.comp(0)[c] + M[c] * mf.cross(0, r, u.v[c]);
      w2[c] = du.comp(1)[c] + M[c] * mf.cross(1, r, u.v[c]);
    }
  }
  VectorField flux(g, 2);
  const double* a1 = a.comp(0);
  const double* a2 = a.comp(1);
  for (std::size_t c = 0; c < n; ++c) {
    double D11 = 0, D12 = 0, D22 = 0, F1 = 0, F2 = 0;
    for (std::size_t q = 0; q < n; ++q) {
      const double d1 = a1[c] - a1[q];
      const double d2 = a2[c] - a2[q];
      const double dd = d1 * d1 + d2 * d2;
      const double q11 = dd - d1 * d1;
      const double q12 = -d1 * d2;
      const double q22 = dd - d2 * d2;
      const double wq = mu.w[q];
      D11 += q11 * M[q] * wq;
      D12 += q12 * M[q] * wq;
      D22 += q22 * M[q] * wq;
      F1 += (q11 * w1[q] + q12 * w2[q]) * wq;
      F2 += (q12 * w1[q] + q22 * w2[q]) * wq;
    }
    flux.comp(0)[c] = D11 * w1[c] + D12 * w2[c] - M[c] * F1;
    flux.comp(1)[c] = D12 * w1[c] + D22 * w2[c] - M[c] * F2;
  }
  return divergence_mu(flux, mu);
}

double field_norm(const ScalarField& f, const Measure& mu) { return norm_l2(f, mu); }

} // namespace

TEST_CASE("paired bracket: constant potential, aligned profiles, stencil oracle") {
  const GridSpec g = GridSpec::torus2d(32);
  const Measure mu = Measure::unit(g);
  const EntropySpec S = EntropySpec::quadratic(true);
  {
    // h constant => X_h = 0 => rhs identically zero
    ScalarField hconst(g);
    hconst.v.assign(hconst.v.size(), 2.0);
    const HamiltonianSpec H = HamiltonianSpec::linear_weighted(hconst, mu);
    const BracketRhs b(BracketRhs::Kind::Double, S, H, mu);
    const ScalarField rhs = b(testing::random_smooth_field(g, 1));
    for (double x : rhs.v) CHECK(x == 0.0);
  }
  const ScalarField h = islands_potential(g);
  const HamiltonianSpec H = HamiltonianSpec::linear_weighted(h, mu);
  const BracketRhs b(BracketRhs::Kind::Double, S, H, mu);
  {
    // g a function of h: u - mean u = h^2 - mean(h^2) gives [g,h] ~ 0
    ScalarField u(g);
    for (std::size_t i = 0; i < u.v.size(); ++i) u.v[i] = h.v[i] * h.v[i];
    const ScalarField rhs = b(u);
    const double scale = field_norm(u, mu);
    CHECK(field_norm(rhs, mu) <= 1e-3 * scale);
  }
  {
    // independent composition with the naive DFT derivative
    const ScalarField u = testing::random_smooth_field(g, 77, 4);
    const ScalarField rhs = b(u);
    const ScalarField h1 = naive_derivative(h, 0);
    const ScalarField h2 = naive_derivative(h, 1);
    const ScalarField u1 = naive_derivative(u, 0);
    const ScalarField u2 = naive_derivative(u, 1);
    VectorField flux(g, 2);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x1 = h2.v[i], x2 = -h1.v[i];
      const double s = x1 * u1.v[i] + x2 * u2.v[i];
      flux.comp(0)[i] = x1 * s;
      flux.comp(1)[i] = x2 * s;
    }
    const ScalarField d1 = naive_derivative(
        ScalarField(g, std::vector<double>(flux.comp(0), flux.comp(0) + g.size())), 0);
    const ScalarField d2 = naive_derivative(
        ScalarField(g, std::vector<double>(flux.comp(1), flux.comp(1) + g.size())), 1);
    double worst = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      worst = std::max(worst, std::abs(rhs.v[i] - d1.v[i] - d2.v[i]));
      scale = std::max(scale, std::abs(rhs.v[i]));
    }
    CHECK(worst <= 1e-10 * scale);
  }
}

TEST_CASE("projector bracket: kernel, orthogonal part, orthogonality property") {
  const GridSpec g = GridSpec::torus2d(32);
  const Measure mu = Measure::unit(g);
  const EntropySpec S = EntropySpec::quadratic(true);
  const HamiltonianSpec H = HamiltonianSpec::euler_kinetic_periodic();
  const BracketRhs b(BracketRhs::Kind::Projector, S, H, mu);
  {
    // u - mean u proportional to phi: an eigenmode does it
    ScalarField u = ScalarField::sample(
        g, [](double x, double y) { return 3.0 * std::cos(x) + 1.0 * std::sin(y); });
    const ScalarField rhs = b(u);
    CHECK(field_norm(rhs, mu) <= 1e-12 * field_norm(u, mu));
  }
  {
    // orthogonality <h, rhs> = 0 on random states
    for (int t = 0; t < 10; ++t) {
      const ScalarField u = testing::random_smooth_field(g, 300 + t);
      const ScalarField rhs = b(u);
      const ScalarField h = hamiltonian_derivative(H, u, mu);
      const ScalarField gf = entropy_derivative(S, u, mu);
      CHECK(std::abs(inner(h, rhs, mu)) <=
            1e-13 * field_norm(h, mu) * field_norm(gf, mu));
    }
  }
  {
    // <g,h> = 0 gives rhs = -g: pick g orthogonal to phi by symmetry
    const ScalarField hw = islands_potential(g);
    const HamiltonianSpec HW = HamiltonianSpec::linear_weighted(hw, mu);
    const BracketRhs bw(BracketRhs::Kind::Projector, S, HW, mu);
    ScalarField u = ScalarField::sample(g, [](double x, double) { return std::sin(x); });
    // <sin(x1), h - mean h> = 0 for the islands profile (even in x1)
    const ScalarField rhs = bw(u);
    for (std::size_t i = 0; i < u.v.size(); ++i)
      CHECK(rhs.v[i] == doctest::Approx(-u.v[i]).epsilon(1e-11));
  }
}

TEST_CASE("collision bracket: moment expansion equals the brute-force double sum") {
  {
    const GridSpec g = GridSpec::dirichlet_rect2d(16, 16);
    const Measure mu = Measure::unit(g);
    const BracketRhs b(BracketRhs::Kind::CollisionDivGrad, EntropySpec::quadratic(),
                       HamiltonianSpec::euler_kinetic_dirichlet(), mu);
    for (int t = 0; t < 20; ++t) {
      const ScalarField u = testing::random_smooth_field(g, 500 + t);
      const ScalarField fast = b(u);
      const ScalarField slow = collision_rhs_brute_force(b, u);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < u.v.size(); ++i) {
        num += (fast.v[i] - slow.v[i]) * (fast.v[i] - slow.v[i]);
        den += slow.v[i] * slow.v[i];
      }
      CHECK(std::sqrt(num) <= 1e-12 * std::sqrt(den));
    }
  }
  {
    // gs-weighted variant exercises the x-dependent kernel terms
    const GridSpec g = GridSpec::gs_rect2d(16, 16);
    const Measure mu = Measure::inverse_r(g);
    const BracketRhs b(BracketRhs::Kind::CollisionDivGrad, EntropySpec::gs_weighted(0.6, 0.2),
                       HamiltonianSpec::gs_poloidal(), mu);
    for (int t = 0; t < 5; ++t) {
      const ScalarField u = testing::random_smooth_field(g, 700 + t);
      const ScalarField fast = b(u);
      const ScalarField slow = collision_rhs_brute_force(b, u);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < u.v.size(); ++i) {
        num += (fast.v[i] - slow.v[i]) * (fast.v[i] - slow.v[i]);
        den += slow.v[i] * slow.v[i];
      }
      CHECK(std::sqrt(num) <= 1e-12 * std::sqrt(den));
    }
  }
}

TEST_CASE("collision bracket: constrained critical points are equilibria") {
  const GridSpec g = GridSpec::dirichlet_rect2d(32, 32);
  const Measure mu = Measure::unit(g);
  const BracketRhs b(BracketRhs::Kind::CollisionDivGrad, EntropySpec::quadratic(),
                     HamiltonianSpec::euler_kinetic_dirichlet(), mu);
  // u a discrete sine mode: dS/du = u is exactly lambda_h * phi_h(u)
  ScalarField u = ScalarField::sample(
      g, [](double x, double y) { return std::sin(kPi * x) * std::sin(kPi * y); });
  const ScalarField rhs = b(u);
  // scale reference: the same bracket applied to a generic state
  const ScalarField probe = b(testing::random_smooth_field(g, 1234));
  CHECK(field_norm(rhs, mu) <= 1e-8 * std::max(field_norm(probe, mu), 1.0));
}

TEST_CASE("diffusion bracket: reduces to the paired bracket in 2d") {
  const GridSpec g = GridSpec::torus2d(32);
  const Measure mu = Measure::unit(g);
  const EntropySpec S = EntropySpec::quadratic(true);
  const ScalarField h = islands_potential(g);
  const HamiltonianSpec H = HamiltonianSpec::linear_weighted(h, mu);
  const BracketRhs bd(BracketRhs::Kind::Double, S, H, mu);
  const BracketRhs bq(BracketRhs::Kind::DiffusionDivGrad, S, H, mu, KappaKind::Unit);
  for (int t = 0; t < 5; ++t) {
    const ScalarField u = testing::random_smooth_field(g, 900 + t);
    const ScalarField r1 = bd(u);
    const ScalarField r2 = bq(u);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.v.size(); ++i) {
      num += (r1.v[i] - r2.v[i]) * (r1.v[i] - r2.v[i]);
      den += r1.v[i] * r1.v[i];
    }
    CHECK(std::sqrt(num) <= 1e-12 * std::sqrt(den));
  }
  {
    ScalarField hconst(g);
    hconst.v.assign(hconst.v.size(), 1.0);
    const BracketRhs bc(BracketRhs::Kind::DiffusionDivGrad, S,
                        HamiltonianSpec::linear_weighted(hconst, mu), mu, KappaKind::Unit);
    const ScalarField rhs = bc(testing::random_smooth_field(g, 2));
    for (double x : rhs.v) CHECK(x == 0.0);
  }
}

TEST_CASE("laplacian bracket: Fourier mode, constants, mass") {
  const GridSpec g = GridSpec::periodic_line1d(64);
  const Measure mu = Measure::unit(g);
  const BracketRhs b(BracketRhs::Kind::Laplacian, EntropySpec::l2(),
                     HamiltonianSpec::mass(), mu);
  {
    ScalarField u = ScalarField::sample(g, [](double x) { return std::cos(x); });
    const ScalarField rhs = b(u);
    for (std::size_t i = 0; i < u.v.size(); ++i)
      CHECK(rhs.v[i] == doctest::Approx(-u.v[i]).epsilon(1e-12));
  }
  {
    ScalarField u(g);
    u.v.assign(u.v.size(), 0.7);
    const ScalarField rhs = b(u);
    for (double x : rhs.v) CHECK(x == 0.0);
  }
  {
    const ScalarField u = testing::random_field(g, 5);
    const ScalarField rhs = b(u);
    CHECK(std::abs(integrate(rhs, mu)) <= 1e-13 * field_norm(rhs, mu));
  }
}

TEST_CASE("degeneracy, dissipativity, and mass invariance across bracket kinds") {
  struct Case {
    BracketRhs bracket;
    bool positive_states;
    bool mass_invariant;
  };
  std::vector<Case> cases;
  {
    const GridSpec g = GridSpec::torus2d(24);
    const Measure mu = Measure::unit(g);
    const EntropySpec S = EntropySpec::quadratic(true);
    const ScalarField h = islands_potential(g);
    cases.push_back({BracketRhs(BracketRhs::Kind::Double, S,
                                HamiltonianSpec::linear_weighted(h, mu), mu),
                     false, true});
    cases.push_back({BracketRhs(BracketRhs::Kind::Projector, S,
                                HamiltonianSpec::euler_kinetic_periodic(), mu),
                     false, true});
    cases.push_back({BracketRhs(BracketRhs::Kind::Double, S,
                                HamiltonianSpec::euler_kinetic_periodic(), mu),
                     false, true});
    cases.push_back({BracketRhs(BracketRhs::Kind::DiffusionDivGrad, S,
                                HamiltonianSpec::euler_kinetic_periodic(), mu),
                     false, true});
  }
  {
    const GridSpec g = GridSpec::dirichlet_rect2d(16, 16);
    const Measure mu = Measure::unit(g);
    cases.push_back({BracketRhs(BracketRhs::Kind::CollisionDivGrad, EntropySpec::quadratic(),
                                HamiltonianSpec::euler_kinetic_dirichlet(), mu),
                     false, false});
    cases.push_back({BracketRhs(BracketRhs::Kind::CollisionDivGrad, EntropySpec::gibbs(),
                                HamiltonianSpec::euler_kinetic_dirichlet(), mu),
                     true, false});
  }
  {
    const GridSpec g = GridSpec::gs_rect2d(16, 16);
    const Measure mu = Measure::inverse_r(g);
    cases.push_back({BracketRhs(BracketRhs::Kind::CollisionDivGrad,
                                EntropySpec::gs_weighted(0.6, 0.2),
                                HamiltonianSpec::gs_poloidal(), mu),
                     false, false});
  }
  {
    const GridSpec g = GridSpec::periodic_line1d(32);
    const Measure mu = Measure::unit(g);
    cases.push_back({BracketRhs(BracketRhs::Kind::Laplacian, EntropySpec::l2(),
                                HamiltonianSpec::mass(), mu),
                     false, true});
  }

  int case_id = 0;
  for (const auto& c : cases) {
    CAPTURE(case_id);
    for (int t = 0; t < 50; ++t) {
      const GridSpec& g = c.bracket.mu.grid;
      const ScalarField u = c.positive_states
                                ? testing::random_positive_field(g, 5000 + 100 * case_id + t)
                                : testing::random_smooth_field(g, 5000 + 100 * case_id + t);
      const ScalarField rhs = c.bracket(u);
      const ScalarField h = hamiltonian_derivative(c.bracket.hamiltonian, u, c.bracket.mu);
      const ScalarField gf = entropy_derivative(c.bracket.entropy, u, c.bracket.mu);
      const double hn = field_norm(h, c.bracket.mu);
      const double rn = field_norm(rhs, c.bracket.mu);
      const double gn = field_norm(gf, c.bracket.mu);
      // degeneracy: the Hamiltonian direction is annihilated
      CHECK(std::abs(inner(h, rhs, c.bracket.mu)) <= 1e-11 * hn * rn);
      // dissipativity: entropy production is nonpositive
      CHECK(inner(gf, rhs, c.bracket.mu) <= 1e-11 * gn * rn);
      // mass invariance for the flux-form periodic kinds
      if (c.mass_invariant)
        CHECK(std::abs(integrate(rhs, c.bracket.mu)) <= 1e-12 * rn);
    }
    ++case_id;
  }
}

TEST_CASE("magnetofrictional bracket: Beltrami kernel, 1d reduction, energy identity") {
  const GridSpec g = GridSpec::torus3d(16);
  const Measure mu = Measure::unit(g);
  const double two_pi = 2.0 * kPi;
  {
    // linear Beltrami field: curl B = 2 pi B, so (curl B) x B = 0
    VectorField B(g, 3);
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k) {
          const double x = g.coord(0, i);
          B.comp(1)[g.index(i, j, k)] = std::sin(two_pi * x);
          B.comp(2)[g.index(i, j, k)] = std::cos(two_pi * x);
        }
    const VectorField rhs = rhs_magnetofrictional(B);
    double worst = 0.0;
    for (double x : rhs.v) worst = std::max(worst, std::abs(x));
    CHECK(worst <= 1e-12 * two_pi * two_pi);
  }
  {
    // one-dimensional reduction: d/dt b = (b^2 b')'
    VectorField B(g, 3);
    std::vector<double> b(g.n[0]);
    for (int i = 0; i < g.n[0]; ++i)
      b[i] = std::sin(two_pi * g.coord(0, i)) + 0.3 * std::cos(4.0 * kPi * g.coord(0, i));
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k) B.comp(2)[g.index(i, j, k)] = b[i];
    const VectorField rhs = rhs_magnetofrictional(B);
    // oracle: naive-DFT (b^2 b')' on the unit-length axis
    auto dft_derivative = [](const std::vector<double>& f) {
      const int n = static_cast<int>(f.size());
      std::vector<double> out(n, 0.0);
      const std::complex<double> I(0.0, 1.0);
      for (int k = 0; k < n; ++k) {
        std::complex<double> c = 0.0;
        for (int j = 0; j < n; ++j)
          c += f[j] * std::exp(-I * (2.0 * kPi * double(k) * double(j) / double(n)));
        c /= double(n);
        int kk = k <= n / 2 ? k : k - n;
        if (n % 2 == 0 && k == n / 2) kk = 0;
        for (int j = 0; j < n; ++j)
          out[j] += (I * (2.0 * kPi * double(kk)) * c *
                     std::exp(I * (2.0 * kPi * double(k) * double(j) / double(n))))
                        .real();
      }
      return out;
    };
    const std::vector<double> bp = dft_derivative(b);
    std::vector<double> flux(g.n[0]);
    for (int i = 0; i < g.n[0]; ++i) flux[i] = b[i] * b[i] * bp[i];
    const std::vector<double> expect_v = dft_derivative(flux);
    ScalarField expect(GridSpec::periodic_line1d(g.n[0]), expect_v);
    double worst = 0.0, scale = 0.0;
    for (int i = 0; i < g.n[0]; ++i) {
      scale = std::max(scale, std::abs(expect.v[i]));
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k) {
          const std::size_t idx = g.index(i, j, k);
          worst = std::max(worst, std::abs(rhs.comp(2)[idx] - expect.v[i]));
          worst = std::max(worst, std::abs(rhs.comp(0)[idx]));
          worst = std::max(worst, std::abs(rhs.comp(1)[idx]));
        }
    }
    CHECK(worst <= 1e-12 * scale);
  }
  {
    // <B, rhs> = -|V|^2 and the output is solenoidal
    for (int t = 0; t < 5; ++t) {
      const VectorField B = testing::random_solenoidal_field(g, 40 + t, 2);
      const VectorField rhs = rhs_magnetofrictional(B);
      const VectorField V = magnetofrictional_velocity(B);
      const double lhs = inner(B, rhs, mu);
      const double v2 = inner(V, V, mu);
      CHECK(std::abs(lhs + v2) <= 1e-10 * v2);
      CHECK(spectral_div_residual(rhs) <= 1e-13);
    }
  }
  {
    // div/mean violations are rejected
    VectorField bad(g, 3);
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k)
          bad.comp(0)[g.index(i, j, k)] = std::sin(two_pi * g.coord(0, i));
    CHECK_THROWS(rhs_magnetofrictional(bad)); // d1 B1 != 0
  }
}
