#include "metrix/elliptic.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "spectral.hpp"

namespace metrix {

ScalarField poisson_periodic(const ScalarField& omega) {
  const GridSpec& g = omega.grid;
  if (!g.periodic() || g.dim > 2)
    throw std::invalid_argument("poisson_periodic: periodic 1d/2d grid required");
  ScalarField phi(g);
  phi.v = spectral::apply_multiplier(g, omega.v, [](double k1, double k2, double k3) {
    const double kk = k1 * k1 + k2 * k2 + k3 * k3;
    return kk == 0.0 ? 0.0 : 1.0 / kk;
  });
  return phi;
}

ScalarField poisson_dirichlet(const ScalarField& omega) {
  const GridSpec& g = omega.grid;
  if (g.kind != GridKind::DirichletRect2D)
    throw std::invalid_argument("poisson_dirichlet: dirichlet-rect2d grid required");
  const int m1 = g.n[0] - 2, m2 = g.n[1] - 2;
  const double h1 = g.spacing(0), h2 = g.spacing(1);
  std::vector<double> interior(static_cast<std::size_t>(m1) * m2);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j)
      interior[static_cast<std::size_t>(i) * m2 + j] = omega.v[g.index(i + 1, j + 1)];
  spectral::dst2(m1, m2, interior);
  // eigenvalues of the 5-point Laplacian under DST-I modes
  const double pi = 3.14159265358979323846;
  for (int p = 0; p < m1; ++p) {
    const double s1 = 2.0 * std::sin(0.5 * pi * (p + 1) / (m1 + 1)) / h1;
    for (int q = 0; q < m2; ++q) {
      const double s2 = 2.0 * std::sin(0.5 * pi * (q + 1) / (m2 + 1)) / h2;
      interior[static_cast<std::size_t>(p) * m2 + q] /= (s1 * s1 + s2 * s2);
    }
  }
  spectral::dst2(m1, m2, interior);
  const double scale = 1.0 / (4.0 * (m1 + 1) * (m2 + 1));
  ScalarField phi(g);
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j)
      phi.v[g.index(i + 1, j + 1)] = interior[static_cast<std::size_t>(i) * m2 + j] * scale;
  return phi;
}

namespace {

void require_gs(const GridSpec& g, const char* where) {
  if (g.kind != GridKind::GsRect2D)
    throw std::invalid_argument(std::string(where) + ": gs-rect2d grid required");
}

// y += alpha * (1/r) * (-Delta*) x on interior nodes; x has boundary values 0.
// The 1/r scaling makes the matrix symmetric.
void gs_symmetrized_apply(const GridSpec& g, const std::vector<double>& x,
                          std::vector<double>& y) {
  const int n1 = g.n[0], n2 = g.n[1];
  const double hr2 = g.spacing(0) * g.spacing(0);
  const double hz2 = g.spacing(1) * g.spacing(1);
  for (int i = 1; i < n1 - 1; ++i) {
    const double rp = 0.5 * (g.coord(0, i) + g.coord(0, i + 1));
    const double rm = 0.5 * (g.coord(0, i - 1) + g.coord(0, i));
    for (int j = 1; j < n2 - 1; ++j) {
      const std::size_t c = g.index(i, j);
      const double lap_r =
          (x[g.index(i + 1, j)] - x[c]) / (rp * hr2) - (x[c] - x[g.index(i - 1, j)]) / (rm * hr2);
      const double lap_z =
          (x[g.index(i, j + 1)] - 2.0 * x[c] + x[g.index(i, j - 1)]) / (hz2 * g.coord(0, i));
      y[c] = -(lap_r + lap_z);
    }
  }
}

} // namespace

ScalarField gs_apply(const ScalarField& psi) {
  require_gs(psi.grid, "gs_apply");
  const GridSpec& g = psi.grid;
  const int n1 = g.n[0], n2 = g.n[1];
  const double hr2 = g.spacing(0) * g.spacing(0);
  const double hz2 = g.spacing(1) * g.spacing(1);
  ScalarField out(g);
  for (int i = 1; i < n1 - 1; ++i) {
    const double r = g.coord(0, i);
    const double rp = 0.5 * (r + g.coord(0, i + 1));
    const double rm = 0.5 * (g.coord(0, i - 1) + r);
    for (int j = 1; j < n2 - 1; ++j) {
      const std::size_t c = g.index(i, j);
      const double dr = (psi.v[g.index(i + 1, j)] - psi.v[c]) / (rp * hr2) -
                        (psi.v[c] - psi.v[g.index(i - 1, j)]) / (rm * hr2);
      const double dz =
          (psi.v[g.index(i, j + 1)] - 2.0 * psi.v[c] + psi.v[g.index(i, j - 1)]) / hz2;
      out.v[c] = r * dr + dz;
    }
  }
  return out;
}

ScalarField gs_solve(const ScalarField& u, double tol, const ScalarField* initial_guess) {
  require_gs(u.grid, "gs_solve");
  const GridSpec& g = u.grid;
  const int n1 = g.n[0], n2 = g.n[1];
  const std::size_t n = g.size();
  const double hr2 = g.spacing(0) * g.spacing(0);
  const double hz2 = g.spacing(1) * g.spacing(1);

  // rhs of the symmetrized system: u / r
  std::vector<double> b(n, 0.0);
  double bnorm2 = 0.0;
  for (int i = 1; i < n1 - 1; ++i)
    for (int j = 1; j < n2 - 1; ++j) {
      const std::size_t c = g.index(i, j);
      b[c] = u.v[c] / g.coord(0, i);
      bnorm2 += b[c] * b[c];
    }
  ScalarField psi(g);
  if (bnorm2 == 0.0) return psi;

  // Jacobi preconditioner: diagonal of the symmetrized operator
  std::vector<double> diag(n, 1.0);
  for (int i = 1; i < n1 - 1; ++i) {
    const double r = g.coord(0, i);
    const double rp = 0.5 * (r + g.coord(0, i + 1));
    const double rm = 0.5 * (g.coord(0, i - 1) + r);
    for (int j = 1; j < n2 - 1; ++j)
      diag[g.index(i, j)] = 1.0 / (rp * hr2) + 1.0 / (rm * hr2) + 2.0 / (hz2 * r);
  }

  std::vector<double> x(n, 0.0), r(n, 0.0), z(n, 0.0), p(n, 0.0), ap(n, 0.0);
  if (initial_guess) {
    require_same_grid(initial_guess->grid, g, "gs_solve");
    x = initial_guess->v;
    for (int i = 0; i < n1; ++i) x[g.index(i, 0)] = x[g.index(i, n2 - 1)] = 0.0;
    for (int j = 0; j < n2; ++j) x[g.index(0, j)] = x[g.index(n1 - 1, j)] = 0.0;
  }
  gs_symmetrized_apply(g, x, r);
  for (std::size_t c = 0; c < n; ++c) r[c] = b[c] - r[c];
  double rz = 0.0;
  for (std::size_t c = 0; c < n; ++c) {
    z[c] = r[c] / diag[c];
    rz += r[c] * z[c];
  }
  p = z;
  const double target2 = tol * tol * bnorm2;
  const std::size_t max_iters = 10 * n;
  double rnorm2 = 0.0;
  for (std::size_t c = 0; c < n; ++c) rnorm2 += r[c] * r[c];
  std::size_t it = 0;
  while (rnorm2 > target2) {
    if (it++ >= max_iters) {
      std::ostringstream msg;
      msg << "gs_solve: CG did not converge in " << max_iters
          << " iterations; relative residual " << std::sqrt(rnorm2 / bnorm2);
      throw std::runtime_error(msg.str());
    }
    gs_symmetrized_apply(g, p, ap);
    double pap = 0.0;
    for (std::size_t c = 0; c < n; ++c) pap += p[c] * ap[c];
    const double alpha = rz / pap;
    rnorm2 = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      x[c] += alpha * p[c];
      r[c] -= alpha * ap[c];
      rnorm2 += r[c] * r[c];
    }
    double rz_new = 0.0;
    for (std::size_t c = 0; c < n; ++c) {
      z[c] = r[c] / diag[c];
      rz_new += r[c] * z[c];
    }
    const double beta = rz_new / rz;
    rz = rz_new;
    for (std::size_t c = 0; c < n; ++c) p[c] = z[c] + beta * p[c];
  }
  psi.v = std::move(x);
  return psi;
}

} // namespace metrix
