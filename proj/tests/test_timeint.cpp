#include <doctest.h>

#include <cmath>

#include "metrix/brackets.hpp"
#include "metrix/elliptic.hpp"
#include "metrix/experiment.hpp"
#include "metrix/operators.hpp"
#include "metrix/presets.hpp"
#include "metrix/timeint.hpp"
#include "support/testing.hpp"

using namespace metrix;

namespace {

// scalar Taylor oracle for one RK4 step of du/dt = lambda u
double rk4_amplification(double z) {
  return 1.0 + z + z * z / 2.0 + z * z * z / 6.0 + z * z * z * z / 24.0;
}

} // namespace

TEST_CASE("rk4: fixed point, linear decay factor, non-finite reporting") {
  {
    RhsFn zero = [](const State& u) { return State(u.size(), 0.0); };
    const State u{1.0, -2.0, 3.0};
    const State out = step_rk4(zero, u, 0.5);
    CHECK(out == u);
  }
  {
    RhsFn decay = [](const State& u) { return State{-u[0]}; };
    const State out = step_rk4(decay, State{1.0}, 0.1);
    CHECK(out[0] == doctest::Approx(rk4_amplification(-0.1)).epsilon(1e-15));
    CHECK(out[0] == doctest::Approx(0.9048375).epsilon(1e-7));
    CHECK(std::abs(out[0] - std::exp(-0.1)) < std::pow(0.1, 5.0));
  }
  {
    RhsFn bad = [](const State& u) {
      return State{u[0] > 2.0 ? std::nan("") : 10.0};
    };
    CHECK_THROWS_WITH_AS(step_rk4(bad, State{1.95}, 0.1),
                         doctest::Contains("stage 2"), std::runtime_error);
  }
}

TEST_CASE("rk4: per-step heat-kernel decay on the periodic line") {
  const GridSpec g = GridSpec::periodic_line1d(64);
  const Measure mu = Measure::unit(g);
  const BracketRhs b(BracketRhs::Kind::Laplacian, EntropySpec::l2(),
                     HamiltonianSpec::mass(), mu);
  RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
  const double dt = 0.01;
  for (int k : {1, 2, 3}) {
    ScalarField u = ScalarField::sample(g, [&](double x) { return std::cos(k * x); });
    const State out = step_rk4(rhs, u.v, dt);
    const double factor = rk4_amplification(-double(k) * k * dt);
    for (std::size_t i = 0; i < u.v.size(); ++i)
      CHECK(out[i] == doctest::Approx(u.v[i] * factor).epsilon(1e-12));
    CHECK(std::abs(factor - std::exp(-double(k) * k * dt)) <=
          std::pow(double(k) * k * dt, 5.0));
  }
}

TEST_CASE("implicit midpoint: fixed point, scalar map, energy conservation") {
  {
    RhsFn zero = [](const State& u) { return State(u.size(), 0.0); };
    const State u{0.5, 1.5};
    CHECK(step_implicit_midpoint(zero, u, 0.3) == u);
  }
  {
    RhsFn decay = [](const State& u) { return State{-u[0]}; };
    const double dt = 0.05;
    const State out = step_implicit_midpoint(decay, State{2.0}, dt, 1e-14, 100);
    CHECK(out[0] == doctest::Approx(2.0 * (1.0 - dt / 2) / (1.0 + dt / 2)).epsilon(1e-13));
  }
  {
    // quadratic invariant preserved per step by the midpoint rule
    const GridSpec g = GridSpec::torus2d(32);
    const Measure mu = Measure::unit(g);
    const EntropySpec S = EntropySpec::quadratic(true);
    const HamiltonianSpec H = HamiltonianSpec::euler_kinetic_periodic();
    const BracketRhs b(BracketRhs::Kind::Projector, S, H, mu);
    RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
    ScalarField u = gaussian_profile(g, 3.1, 3.1, 0.5, 0.9, 1.0);
    const double h0 = hamiltonian_value(H, u, mu);
    State s = u.v;
    for (int k = 0; k < 20; ++k) {
      s = step_implicit_midpoint(rhs, s, 1e-2, 1e-13, 50);
      const double h = hamiltonian_value(H, ScalarField(g, s), mu);
      CHECK(std::abs(h - h0) <= 1e-11 * std::abs(h0));
    }
  }
  {
    // divergence reported when the fixed point cannot contract
    RhsFn stiff = [](const State& u) { return State{-1e6 * u[0]}; };
    CHECK_THROWS_AS(step_implicit_midpoint(stiff, State{1.0}, 1.0, 1e-13, 50),
                    std::runtime_error);
  }
}

TEST_CASE("implicit midpoint: quadratic-H drift over 1e4 steps") {
  // Euler periodic
  {
    const GridSpec g = GridSpec::torus2d(16);
    const Measure mu = Measure::unit(g);
    const HamiltonianSpec H = HamiltonianSpec::euler_kinetic_periodic();
    const BracketRhs b(BracketRhs::Kind::Projector, EntropySpec::quadratic(true), H, mu);
    RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
    ScalarField u = gaussian_profile(g, 3.1, 3.1, 0.7, 1.1, 1.0);
    const double h0 = hamiltonian_value(H, u, mu);
    State s = u.v;
    double drift = 0.0;
    for (int k = 0; k < 10000; ++k) {
      s = step_implicit_midpoint(rhs, s, 1e-3, 1e-13, 50);
      if (k % 100 == 0)
        drift = std::max(drift, std::abs(hamiltonian_value(H, ScalarField(g, s), mu) - h0) /
                                    std::abs(h0));
    }
    drift = std::max(drift,
                     std::abs(hamiltonian_value(H, ScalarField(g, s), mu) - h0) / std::abs(h0));
    CHECK(drift <= 1e-10);
  }
  // collision bracket on the Dirichlet square
  {
    const GridSpec g = GridSpec::dirichlet_rect2d(16, 16);
    const Measure mu = Measure::unit(g);
    const HamiltonianSpec H = HamiltonianSpec::euler_kinetic_dirichlet();
    const BracketRhs b(BracketRhs::Kind::CollisionDivGrad, EntropySpec::quadratic(), H, mu);
    RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
    ScalarField u = gaussian_profile(g, 0.5, 0.5, 0.1, 0.26, 1.0);
    const double h0 = hamiltonian_value(H, u, mu);
    State s = u.v;
    for (int k = 0; k < 10000; ++k) s = step_implicit_midpoint(rhs, s, 5e-3, 1e-13, 50);
    const double drift =
        std::abs(hamiltonian_value(H, ScalarField(g, s), mu) - h0) / std::abs(h0);
    CHECK(drift <= 1e-10);
  }
  // weighted-entropy collision bracket on the flux rectangle
  {
    const GridSpec g = GridSpec::gs_rect2d(16, 16);
    const Measure mu = Measure::inverse_r(g);
    const HamiltonianSpec H = HamiltonianSpec::gs_poloidal();
    const BracketRhs b(BracketRhs::Kind::CollisionDivGrad, EntropySpec::gs_weighted(0.6, 0.2),
                       H, mu);
    RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
    ScalarField u = gaussian_profile(g, 4.0, 0.0, 0.7, 1.8, 1.0);
    const double h0 = hamiltonian_value(H, u, mu);
    State s = u.v;
    for (int k = 0; k < 10000; ++k) s = step_implicit_midpoint(rhs, s, 1e-3, 1e-13, 50);
    const double drift =
        std::abs(hamiltonian_value(H, ScalarField(g, s), mu) - h0) / std::abs(h0);
    CHECK(drift <= 1e-10);
  }
}

TEST_CASE("run: zero horizon, early stop, determinism") {
  const GridSpec g = GridSpec::periodic_line1d(32);
  const Measure mu = Measure::unit(g);
  const BracketRhs b(BracketRhs::Kind::Laplacian, EntropySpec::l2(),
                     HamiltonianSpec::mass(), mu);
  auto make_hooks = [&]() {
    ProblemHooks hooks;
    hooks.rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
    hooks.rhs_norm = [&](const State& r) {
      return norm_l2(ScalarField(g, r), mu);
    };
    hooks.record = [&](double t, const State& s) {
      DiagnosticsRecord rec;
      rec.t = t;
      rec.S = entropy_value(EntropySpec::l2(), ScalarField(g, s), mu);
      rec.H = integrate(ScalarField(g, s), mu);
      rec.M = rec.H;
      return rec;
    };
    return hooks;
  };
  const ScalarField u0 = testing::random_field(g, 8);
  {
    RunConfig cfg;
    cfg.t_end = 0.0;
    const Trajectory traj = run(make_hooks(), u0.v, cfg);
    CHECK(traj.records.size() == 1);
    CHECK(traj.records.front().t == 0.0);
  }
  {
    RunConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 50.0;
    cfg.stop_tol = 1e-6;
    cfg.record_every = 100;
    const Trajectory traj = run(make_hooks(), u0.v, cfg);
    CHECK(traj.stopped_early);
    CHECK(traj.final_time < 50.0);
    CHECK(traj.records.back().rhs_norm <= 1e-6 * traj.records.front().rhs_norm);
  }
  {
    RunConfig cfg;
    cfg.dt = 1e-3;
    cfg.t_end = 0.5;
    cfg.record_every = 50;
    const Trajectory a = run(make_hooks(), u0.v, cfg);
    const Trajectory b2 = run(make_hooks(), u0.v, cfg);
    REQUIRE(a.records.size() == b2.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      CHECK(a.records[i].S == b2.records[i].S);
      CHECK(a.records[i].rhs_norm == b2.records[i].rhs_norm);
    }
    CHECK(a.final_state == b2.final_state);
  }
}

TEST_CASE("run: rk4 order check on the heat problem (error ratio about 16)") {
  const GridSpec g = GridSpec::periodic_line1d(32);
  const Measure mu = Measure::unit(g);
  const BracketRhs b(BracketRhs::Kind::Laplacian, EntropySpec::l2(),
                     HamiltonianSpec::mass(), mu);
  RhsFn rhs = [&](const State& s) { return b(ScalarField(g, s)).v; };
  ScalarField u0 = ScalarField::sample(
      g, [](double x) { return std::cos(2.0 * x) + 0.5 * std::sin(3.0 * x); });
  auto solve = [&](double dt) {
    State s = u0.v;
    const int steps = static_cast<int>(std::round(1.0 / dt));
    for (int k = 0; k < steps; ++k) s = step_rk4(rhs, s, dt);
    return s;
  };
  ScalarField exact = ScalarField::sample(g, [](double x) {
    return std::exp(-4.0) * std::cos(2.0 * x) + 0.5 * std::exp(-9.0) * std::sin(3.0 * x);
  });
  auto error = [&](const State& s) {
    double e = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) e = std::max(e, std::abs(s[i] - exact.v[i]));
    return e;
  };
  // steps chosen inside the rk4 stability region of the stiffest mode
  const double e1 = error(solve(0.0125));
  const double e2 = error(solve(0.00625));
  CHECK(e1 / e2 > 12.0);
  CHECK(e1 / e2 < 20.0);
}
