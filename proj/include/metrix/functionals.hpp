#pragma once

#include <functional>
#include <memory>
#include <string>

#include "metrix/grid.hpp"

namespace metrix {

/// Entropy density descriptor. `subtract_mean` evaluates the density on the
/// fluctuation u - mean(u) (used by the periodic vorticity problems).
struct EntropySpec {
  enum class Kind { Quadratic, Gibbs, GsWeighted, L2, MagneticEnergy };
  Kind kind = Kind::Quadratic;
  bool subtract_mean = false;
  double C = 0.0, D = 0.0; // gs-weighted parameters

  static EntropySpec quadratic(bool subtract_mean = false);
  static EntropySpec gibbs();
  static EntropySpec gs_weighted(double C, double D);
  static EntropySpec l2();
  static EntropySpec magnetic_energy();
};

double entropy_value(const EntropySpec& s, const ScalarField& u, const Measure& mu);
ScalarField entropy_derivative(const EntropySpec& s, const ScalarField& u, const Measure& mu);
double entropy_value(const EntropySpec& s, const VectorField& B, const Measure& mu);
VectorField entropy_derivative(const EntropySpec& s, const VectorField& B, const Measure& mu);

/// Kernel weight M(x,y) with M * d2s/dy2 = 1, plus the mixed derivative
/// dx dy s (per axis; zero for x-independent densities).
struct MFunction {
  std::function<double(double r, double y)> M;
  // cross(axis, r, y): the axis-component of d/dx d/dy s at (x, y)
  std::function<double(int axis, double r, double y)> cross;
};
MFunction m_function(const EntropySpec& s, const GridSpec& grid);

class GsSolveCache; // warm-start state for the Grad-Shafranov solver

struct HamiltonianSpec {
  enum class Kind {
    LinearWeighted,        // H = (h - mean(h), u)
    EulerKineticPeriodic,  // H = (phi, u)/2, -lap phi = u - mean(u)
    EulerKineticDirichlet, // H = (phi, u)/2, Dirichlet Poisson
    GsPoloidal,            // H = (psi, u)_mu / 2, -Delta* psi = u
    Mass,                  // H = integral of u
    Helicity3D,            // H = (A, B)/2 with curl A = B
  };
  Kind kind = Kind::Mass;
  ScalarField weight;        // linear-weighted h (mean already removed)
  double weight_norm2 = 0.0; // ||h - mean h||^2
  double gs_tol = 1e-12;
  std::shared_ptr<GsSolveCache> gs_cache;

  static HamiltonianSpec linear_weighted(const ScalarField& h, const Measure& mu);
  static HamiltonianSpec euler_kinetic_periodic();
  static HamiltonianSpec euler_kinetic_dirichlet();
  static HamiltonianSpec gs_poloidal();
  static HamiltonianSpec mass();
  static HamiltonianSpec helicity3d();
};

double hamiltonian_value(const HamiltonianSpec& h, const ScalarField& u, const Measure& mu);
ScalarField hamiltonian_derivative(const HamiltonianSpec& h, const ScalarField& u,
                                   const Measure& mu);
double hamiltonian_value(const HamiltonianSpec& h, const VectorField& B, const Measure& mu);
VectorField hamiltonian_derivative(const HamiltonianSpec& h, const VectorField& B,
                                   const Measure& mu);

/// Magnetic helicity integral A.B dx for a solenoidal mean-free B on torus3d.
double helicity(const VectorField& B);

} // namespace metrix
