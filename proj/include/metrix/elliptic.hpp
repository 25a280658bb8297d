#pragma once

#include <optional>

#include "metrix/grid.hpp"

namespace metrix {

/// Solve -lap(phi) = omega - mean(omega) on torus2d (or periodic-line1d),
/// with the zero mode of phi set to 0. FFT-diagonal, residual at round-off.
ScalarField poisson_periodic(const ScalarField& omega);

/// Solve -lap(phi) = omega on a dirichlet-rect2d grid with phi = 0 on the
/// boundary; inverts the 5-point Laplacian exactly via DST-I.
ScalarField poisson_dirichlet(const ScalarField& omega);

/// Conservative 5-point discretization of the operator
/// r d/dr(1/r d/dr) + d2/dz2 at interior nodes (boundary rows are zero).
ScalarField gs_apply(const ScalarField& psi);

/// Solve -gs_apply(psi) = u with psi = 0 on the boundary by preconditioned
/// conjugate gradients on the 1/r-symmetrized system.
/// Throws on non-convergence (message reports the final residual).
ScalarField gs_solve(const ScalarField& u, double tol = 1e-10,
                     const ScalarField* initial_guess = nullptr);

} // namespace metrix
