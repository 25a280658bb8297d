#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "metrix/findim.hpp"
#include "metrix/timeint.hpp"

using namespace metrix;

namespace {

double norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

std::vector<double> diff(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> d(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) d[i] = a[i] - b[i];
  return d;
}

} // namespace

TEST_CASE("equilibria annihilate the bracket") {
  {
    const FinDimSystem sys =
        FinDimSystem::example1({0.0, 1.0, 2.0}, {1.0, 0.0, 0.0}, {0.3, -0.4, 0.5});
    const double eta = 0.7;
    const auto z = sys.equilibrium(eta);
    CHECK(norm(sys.rhs(z)) <= 1e-13);
    CHECK(sys.hamiltonian(z) == doctest::Approx(eta).epsilon(1e-13));
  }
  {
    const FinDimSystem sys = FinDimSystem::example2({0.0, 1.0, 2.0}, {1.0, 0.0, 0.0});
    const auto z = sys.equilibrium(0.9);
    CHECK(norm(sys.rhs(z)) <= 1e-13);
  }
  {
    const FinDimSystem sys = FinDimSystem::example3({0.0, 0.0, -2.0}, 3);
    const auto z = sys.equilibrium(0.5);
    CHECK(norm(sys.rhs(z)) <= 1e-13);
    CHECK(sys.entropy(z) == doctest::Approx(-std::sqrt(2.0 * 0.5) * 2.0).epsilon(1e-13));
    CHECK_THROWS_AS(sys.rhs(std::vector<double>{0.0, 0.0, -1.0}), std::domain_error);
  }
}

TEST_CASE("system invariants are validated") {
  CHECK_THROWS(FinDimSystem::example1({0.5, 1.0}, {1.0, 0.0}, {0.0, 0.0})); // kvals[0] != 0
  CHECK_THROWS(FinDimSystem::example1({0.0, -1.0}, {1.0, 0.0}, {0.0, 0.0})); // not PSD
  CHECK_THROWS(FinDimSystem::example3({0.0, 0.0}, 3)); // size mismatch
}

TEST_CASE("closed-form orbit of the constant-kernel system") {
  const FinDimSystem sys =
      FinDimSystem::example1({0.0, 1.0, 2.0}, {1.0, 0.0, 0.0}, {0.2, -0.1, 0.4});
  const std::vector<double> z0{0.5, 0.7, -0.3};
  {
    const auto z = analytic_solution_example1(sys, z0, 0.0);
    for (std::size_t i = 0; i < z.size(); ++i)
      CHECK(z[i] == doctest::Approx(z0[i]).epsilon(1e-14));
  }
  {
    // long-time limit and the exponential envelope
    const double eta = sys.hamiltonian(z0);
    const auto z_eta = sys.equilibrium(eta);
    const double d0 = norm(diff(z0, z_eta));
    for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
      const auto z = analytic_solution_example1(sys, z0, t);
      CHECK(norm(diff(z, z_eta)) <= d0 * std::exp(-t) * (1.0 + 1e-12));
    }
  }
  {
    // cross-check against RK4 at dt = 1e-3
    RhsFn rhs = [&sys](const State& z) { return sys.rhs(z); };
    State z = z0;
    const double dt = 1e-3;
    for (int k = 0; k < 3000; ++k) z = step_rk4(rhs, z, dt);
    const auto ref = analytic_solution_example1(sys, z0, 3.0);
    CHECK(norm(diff(z, ref)) <= 1e-8);
  }
}

TEST_CASE("closed-form decay constants") {
  {
    const FinDimSystem sys =
        FinDimSystem::example1({0.0, 0.5, 1.5}, {1.0, 0.0, 0.0}, {0.1, 0.2, 0.3});
    CHECK(pl_constant(sys, 0.3) == doctest::Approx(1.0).epsilon(1e-12)); // 2 K1, K1 = 0.5
  }
  {
    const FinDimSystem sys = FinDimSystem::example2({0.0, 1.0, 2.0}, {1.0, 0.0, 0.0});
    CHECK(pl_constant(sys, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  }
  {
    const FinDimSystem sys = FinDimSystem::example3({0.0, 0.0, -2.0}, 3);
    CHECK(pl_constant(sys, 0.5) == doctest::Approx(2.0).epsilon(1e-12));
  }
}

TEST_CASE("PL inequality on level-set samples") {
  {
    const FinDimSystem sys =
        FinDimSystem::example1({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5},
                               {0.2, -0.4, 0.3, 0.1});
    const PlReport rep = check_pl_inequality(sys, 0.6, 1000, 42);
    CHECK(rep.samples == 1000);
    CHECK(rep.satisfied);
  }
  {
    const FinDimSystem sys = FinDimSystem::example3({0.0, 0.0, -2.0}, 3);
    const PlReport rep = check_pl_inequality(sys, 0.5, 1000, 43);
    CHECK(rep.satisfied);
    CHECK(rep.min_margin >= -1e-10 * rep.scale);
  }
  {
    // the ball-restricted constant of example 2 can fail outside the ball
    const FinDimSystem sys = FinDimSystem::example2({0.0, 1.0, 2.0}, {1.0, 0.0, 0.0});
    const double R = 1.0;
    const double kappa = pl_constant(sys, 0.2, R);
    // in-ball samples satisfy the inequality
    const PlReport rep = check_pl_inequality(sys, 0.2, 500, 44, R);
    CHECK(rep.satisfied);
    // a far sample on the same level set violates the R = 1 constant
    std::vector<double> zfar{0.2, 4.0, 0.0};
    CHECK(pl_margin(sys, zfar, kappa) < 0.0);
  }
}

TEST_CASE("orbits: conserved level, monotone entropy, entropy-excess envelope") {
  struct Setup {
    FinDimSystem sys;
    State z0;
    double ball;
  };
  std::vector<Setup> setups;
  setups.push_back({FinDimSystem::example1({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5},
                                           {0.2, -0.4, 0.3, 0.1}),
                    {1.0, -0.5, 0.8, 0.3},
                    0.0});
  setups.push_back({FinDimSystem::example2({0.0, 1.0, 2.0, 3.0}, {0.5, 0.5, 0.5, 0.5}),
                    {0.8, 0.1, -0.3, 0.2},
                    1.0});
  setups.push_back({FinDimSystem::example3({0.0, 0.0, -2.0}, 3), {0.6, -0.4, 0.7}, 0.0});

  for (auto& setup : setups) {
    const FinDimSystem& sys = setup.sys;
    RhsFn rhs = [&sys](const State& z) { return sys.rhs(z); };
    const double eta = sys.hamiltonian(setup.z0);
    const double S_eta = sys.entropy_floor(eta);
    const double kappa = setup.ball > 0.0 ? pl_constant(sys, eta, setup.ball)
                                          : pl_constant(sys, eta);
    const double H0 = sys.hamiltonian(setup.z0);
    const double excess0 = sys.entropy(setup.z0) - S_eta;

    State z = setup.z0;
    double S_prev = sys.entropy(z);
    const double dt = 1e-3;
    double h_drift = 0.0;
    for (int k = 1; k <= 20000; ++k) {
      z = step_rk4(rhs, z, dt);
      const double t = k * dt;
      const double S = sys.entropy(z);
      CHECK(S <= S_prev + 1e-12 * std::abs(S_prev));
      S_prev = S;
      h_drift = std::max(h_drift,
                         std::abs(sys.hamiltonian(z) - H0) / std::max(std::abs(H0), 1e-300));
      const double bound = excess0 * std::exp(-kappa * t);
      if (bound > 1e-12 * std::max(1.0, std::abs(S_eta)))
        CHECK(S - S_eta <= bound * (1.0 + 1e-6));
    }
    CHECK(h_drift <= 1e-8);
  }
}
