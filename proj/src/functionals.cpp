#include "metrix/functionals.hpp"

#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>

#include "metrix/elliptic.hpp"
#include "metrix/operators.hpp"

namespace metrix {

EntropySpec EntropySpec::quadratic(bool subtract_mean) {
  return {Kind::Quadratic, subtract_mean, 0.0, 0.0};
}
EntropySpec EntropySpec::gibbs() { return {Kind::Gibbs, false, 0.0, 0.0}; }
EntropySpec EntropySpec::gs_weighted(double C, double D) {
  return {Kind::GsWeighted, false, C, D};
}
EntropySpec EntropySpec::l2() { return {Kind::L2, false, 0.0, 0.0}; }
EntropySpec EntropySpec::magnetic_energy() { return {Kind::MagneticEnergy, false, 0.0, 0.0}; }

namespace {

void check_gibbs_domain(const ScalarField& u) {
  for (std::size_t i = 0; i < u.v.size(); ++i) {
    if (!(u.v[i] > 0.0)) {
      std::ostringstream msg;
      msg << "gibbs entropy requires u > 0; u[" << i << "] = " << u.v[i];
      throw std::domain_error(msg.str());
    }
  }
}

double gs_denominator(const EntropySpec& s, double r) {
  const double d = s.C * r * r + s.D;
  if (d <= 0.0) throw std::domain_error("gs-weighted entropy requires C r^2 + D > 0");
  return d;
}

} // namespace

double entropy_value(const EntropySpec& s, const ScalarField& u, const Measure& mu) {
  require_same_grid(u.grid, mu.grid, "entropy_value");
  const GridSpec& g = u.grid;
  ScalarField dens(g);
  switch (s.kind) {
    case EntropySpec::Kind::Quadratic: {
      const double shift = s.subtract_mean ? domain_mean(u, mu) : 0.0;
      for (std::size_t i = 0; i < u.v.size(); ++i) {
        const double y = u.v[i] - shift;
        dens.v[i] = 0.5 * y * y;
      }
      break;
    }
    case EntropySpec::Kind::L2:
      for (std::size_t i = 0; i < u.v.size(); ++i) dens.v[i] = 0.5 * u.v[i] * u.v[i];
      break;
    case EntropySpec::Kind::Gibbs:
      check_gibbs_domain(u);
      for (std::size_t i = 0; i < u.v.size(); ++i) dens.v[i] = u.v[i] * std::log(u.v[i]);
      break;
    case EntropySpec::Kind::GsWeighted:
      for (int i = 0; i < g.n[0]; ++i) {
        const double den = gs_denominator(s, g.coord(0, i));
        for (int j = 0; j < g.n[1]; ++j) {
          const double y = u.v[g.index(i, j)];
          dens.v[g.index(i, j)] = 0.5 * y * y / den;
        }
      }
      break;
    case EntropySpec::Kind::MagneticEnergy:
      throw std::invalid_argument("magnetic-energy entropy applies to vector fields");
  }
  return integrate(dens, mu);
}

ScalarField entropy_derivative(const EntropySpec& s, const ScalarField& u, const Measure& mu) {
  require_same_grid(u.grid, mu.grid, "entropy_derivative");
  const GridSpec& g = u.grid;
  ScalarField out(g);
  switch (s.kind) {
    case EntropySpec::Kind::Quadratic: {
      const double shift = s.subtract_mean ? domain_mean(u, mu) : 0.0;
      for (std::size_t i = 0; i < u.v.size(); ++i) out.v[i] = u.v[i] - shift;
      break;
    }
    case EntropySpec::Kind::L2:
      out.v = u.v;
      break;
    case EntropySpec::Kind::Gibbs:
      check_gibbs_domain(u);
      for (std::size_t i = 0; i < u.v.size(); ++i) out.v[i] = 1.0 + std::log(u.v[i]);
      break;
    case EntropySpec::Kind::GsWeighted:
      for (int i = 0; i < g.n[0]; ++i) {
        const double den = gs_denominator(s, g.coord(0, i));
        for (int j = 0; j < g.n[1]; ++j) out.v[g.index(i, j)] = u.v[g.index(i, j)] / den;
      }
      break;
    case EntropySpec::Kind::MagneticEnergy:
      throw std::invalid_argument("magnetic-energy entropy applies to vector fields");
  }
  return out;
}

double entropy_value(const EntropySpec& s, const VectorField& B, const Measure& mu) {
  if (s.kind != EntropySpec::Kind::MagneticEnergy)
    throw std::invalid_argument("vector entropy_value: magnetic-energy kind required");
  return 0.5 * inner(B, B, mu);
}

VectorField entropy_derivative(const EntropySpec& s, const VectorField& B, const Measure&) {
  if (s.kind != EntropySpec::Kind::MagneticEnergy)
    throw std::invalid_argument("vector entropy_derivative: magnetic-energy kind required");
  return B;
}

MFunction m_function(const EntropySpec& s, const GridSpec&) {
  MFunction out;
  switch (s.kind) {
    case EntropySpec::Kind::Quadratic:
    case EntropySpec::Kind::L2:
      out.M = [](double, double) { return 1.0; };
      out.cross = [](int, double, double) { return 0.0; };
      break;
    case EntropySpec::Kind::Gibbs:
      out.M = [](double, double y) {
        if (!(y > 0.0)) throw std::domain_error("gibbs kernel weight requires u > 0");
        return y;
      };
      out.cross = [](int, double, double) { return 0.0; };
      break;
    case EntropySpec::Kind::GsWeighted: {
      const double C = s.C, D = s.D;
      out.M = [C, D](double r, double) {
        const double den = C * r * r + D;
        if (den <= 0.0) throw std::domain_error("gs-weighted kernel requires C r^2 + D > 0");
        return den;
      };
      out.cross = [C, D](int axis, double r, double y) {
        if (axis != 0) return 0.0;
        const double den = C * r * r + D;
        return -2.0 * C * r * y / (den * den);
      };
      break;
    }
    case EntropySpec::Kind::MagneticEnergy:
      throw std::invalid_argument("m_function: scalar entropy required");
  }
  return out;
}

// ---------------------------------------------------------------------------

class GsSolveCache {
public:
  ScalarField solve(const ScalarField& u, double tol) {
    std::lock_guard<std::mutex> lock(mutex_);
    ScalarField psi = have_ ? gs_solve(u, tol, &last_) : gs_solve(u, tol);
    last_ = psi;
    have_ = true;
    return psi;
  }

private:
  std::mutex mutex_;
  ScalarField last_;
  bool have_ = false;
};

HamiltonianSpec HamiltonianSpec::linear_weighted(const ScalarField& h, const Measure& mu) {
  HamiltonianSpec spec;
  spec.kind = Kind::LinearWeighted;
  spec.weight = h;
  const double mean = domain_mean(h, mu);
  for (double& x : spec.weight.v) x -= mean;
  spec.weight_norm2 = inner(spec.weight, spec.weight, mu);
  return spec;
}

HamiltonianSpec HamiltonianSpec::euler_kinetic_periodic() {
  HamiltonianSpec s;
  s.kind = Kind::EulerKineticPeriodic;
  return s;
}

HamiltonianSpec HamiltonianSpec::euler_kinetic_dirichlet() {
  HamiltonianSpec s;
  s.kind = Kind::EulerKineticDirichlet;
  return s;
}

HamiltonianSpec HamiltonianSpec::gs_poloidal() {
  HamiltonianSpec s;
  s.kind = Kind::GsPoloidal;
  s.gs_cache = std::make_shared<GsSolveCache>();
  return s;
}

HamiltonianSpec HamiltonianSpec::mass() { return HamiltonianSpec{}; }

HamiltonianSpec HamiltonianSpec::helicity3d() {
  HamiltonianSpec s;
  s.kind = Kind::Helicity3D;
  return s;
}

ScalarField hamiltonian_derivative(const HamiltonianSpec& h, const ScalarField& u,
                                   const Measure& mu) {
  require_same_grid(u.grid, mu.grid, "hamiltonian_derivative");
  switch (h.kind) {
    case HamiltonianSpec::Kind::LinearWeighted:
      return h.weight;
    case HamiltonianSpec::Kind::EulerKineticPeriodic:
      return poisson_periodic(u);
    case HamiltonianSpec::Kind::EulerKineticDirichlet:
      return poisson_dirichlet(u);
    case HamiltonianSpec::Kind::GsPoloidal:
      return h.gs_cache ? h.gs_cache->solve(u, h.gs_tol) : gs_solve(u, h.gs_tol);
    case HamiltonianSpec::Kind::Mass: {
      ScalarField one(u.grid);
      one.v.assign(one.v.size(), 1.0);
      return one;
    }
    case HamiltonianSpec::Kind::Helicity3D:
      throw std::invalid_argument("helicity3d applies to vector fields");
  }
  throw std::logic_error("unreachable");
}

double hamiltonian_value(const HamiltonianSpec& h, const ScalarField& u, const Measure& mu) {
  switch (h.kind) {
    case HamiltonianSpec::Kind::LinearWeighted:
      return inner(h.weight, u, mu);
    case HamiltonianSpec::Kind::EulerKineticPeriodic:
    case HamiltonianSpec::Kind::EulerKineticDirichlet:
      return 0.5 * inner(hamiltonian_derivative(h, u, mu), u, mu);
    case HamiltonianSpec::Kind::GsPoloidal: {
      // variational form <psi,u> - <psi,A psi>/2: stationary at the exact
      // solve, so the iterative-solver error enters only quadratically
      const ScalarField psi = hamiltonian_derivative(h, u, mu);
      return inner(psi, u, mu) + 0.5 * inner(psi, gs_apply(psi), mu);
    }
    case HamiltonianSpec::Kind::Mass:
      return integrate(u, mu);
    case HamiltonianSpec::Kind::Helicity3D:
      throw std::invalid_argument("helicity3d applies to vector fields");
  }
  throw std::logic_error("unreachable");
}

VectorField hamiltonian_derivative(const HamiltonianSpec& h, const VectorField& B,
                                   const Measure&) {
  if (h.kind != HamiltonianSpec::Kind::Helicity3D)
    throw std::invalid_argument("vector hamiltonian_derivative: helicity3d kind required");
  return vector_potential(B);
}

double hamiltonian_value(const HamiltonianSpec& h, const VectorField& B, const Measure& mu) {
  if (h.kind != HamiltonianSpec::Kind::Helicity3D)
    throw std::invalid_argument("vector hamiltonian_value: helicity3d kind required");
  return 0.5 * inner(vector_potential(B), B, mu);
}

double helicity(const VectorField& B) {
  const Measure mu = Measure::unit(B.grid);
  return inner(vector_potential(B), B, mu);
}

} // namespace metrix
