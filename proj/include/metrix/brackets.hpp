#pragma once

#include "metrix/functionals.hpp"
#include "metrix/grid.hpp"

namespace metrix {

enum class KappaKind { Unit, M };

/// Right-hand-side builder du/dt = -K(u) dS/du for one metric bracket family.
struct BracketRhs {
  enum class Kind {
    Double,           // paired [.,h] bracket: parallel diffusion along contours of h
    Projector,        // orthogonal projector complement of dH/du
    CollisionDivGrad, // nonlocal grad-pair kernel, O(N) via moment expansion
    DiffusionDivGrad, // local grad kernel
    Laplacian,        // plain div grad of dS/du
    Magnetofrictional // curl((J x B) x B) on torus3d
  };

  Kind kind;
  EntropySpec entropy;
  HamiltonianSpec hamiltonian;
  Measure mu;
  KappaKind kappa = KappaKind::M;
  // gradient of dH/du precomputed when the Hamiltonian is a fixed weight
  std::shared_ptr<const VectorField> fixed_grad_h;

  BracketRhs(Kind k, EntropySpec s, HamiltonianSpec h, Measure m,
             KappaKind kap = KappaKind::M);

  ScalarField operator()(const ScalarField& u) const;
  VectorField operator()(const VectorField& B) const;
};

ScalarField rhs_double(const BracketRhs& b, const ScalarField& u);
ScalarField rhs_projector(const BracketRhs& b, const ScalarField& u);
ScalarField rhs_collision_div_grad(const BracketRhs& b, const ScalarField& u);
ScalarField rhs_diffusion_div_grad(const BracketRhs& b, const ScalarField& u);
ScalarField rhs_laplacian(const BracketRhs& b, const ScalarField& u);
VectorField rhs_magnetofrictional(const VectorField& B);

/// Effective velocity (curl B) x B of the magneto-frictional flow.
VectorField magnetofrictional_velocity(const VectorField& B);

} // namespace metrix
