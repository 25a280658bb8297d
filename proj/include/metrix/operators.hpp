#pragma once

#include "metrix/grid.hpp"

namespace metrix {

/// Quadrature: sum of f * w over all nodes.
double integrate(const ScalarField& f, const Measure& mu);

/// L^2(mu) inner products and norms.
double inner(const ScalarField& a, const ScalarField& b, const Measure& mu);
double inner(const VectorField& a, const VectorField& b, const Measure& mu);
double norm_l2(const ScalarField& f, const Measure& mu);
double norm_l2(const VectorField& f, const Measure& mu);

/// mu-average of f over the domain.
double domain_mean(const ScalarField& f, const Measure& mu);

/// Gradient: spectral on periodic grids, 2nd-order finite differences with
/// one-sided closures on bounded grids. Output has dim components.
VectorField gradient(const ScalarField& f);

/// Per-axis derivative (same schemes as gradient).
ScalarField derivative(const ScalarField& f, int axis);

/// Divergence defined as the exact negative adjoint of `gradient` under the
/// quadrature of `integrate`: <grad f, F>_mu = -<f, div_mu F>_mu to round-off
/// for all discrete fields.
ScalarField divergence_mu(const VectorField& F, const Measure& mu);

/// Spectral curl on torus3d.
VectorField curl3d(const VectorField& F);

/// Coulomb-gauge vector potential on torus3d: curl A = B, div A = 0, zero mean.
/// Requires B mean-free and divergence-free (checked spectrally).
VectorField vector_potential(const VectorField& B);

/// Max |k_hat . F_hat(k)| / ||F||, the spectral divergence residual (torus3d).
double spectral_div_residual(const VectorField& F);

} // namespace metrix
