#include "metrix/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace metrix {

const char* grid_kind_name(GridKind k) {
  switch (k) {
    case GridKind::Torus2D: return "torus2d";
    case GridKind::DirichletRect2D: return "dirichlet-rect2d";
    case GridKind::GsRect2D: return "gs-rect2d";
    case GridKind::PeriodicLine1D: return "periodic-line1d";
    case GridKind::Torus3D: return "torus3d";
  }
  return "?";
}

GridKind grid_kind_from_name(const std::string& name) {
  if (name == "torus2d") return GridKind::Torus2D;
  if (name == "dirichlet-rect2d") return GridKind::DirichletRect2D;
  if (name == "gs-rect2d") return GridKind::GsRect2D;
  if (name == "periodic-line1d") return GridKind::PeriodicLine1D;
  if (name == "torus3d") return GridKind::Torus3D;
  throw std::invalid_argument("unknown grid kind: " + name);
}

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_resolution(int n) {
  if (n < 8) throw std::invalid_argument("grid resolution must be >= 8");
}
} // namespace

GridSpec GridSpec::torus2d(int n) {
  check_resolution(n);
  GridSpec g;
  g.kind = GridKind::Torus2D;
  g.dim = 2;
  g.n = {n, n, 1};
  g.extent = {{{0.0, kTwoPi}, {0.0, kTwoPi}, {0, 0}}};
  return g;
}

GridSpec GridSpec::dirichlet_rect2d(int n1, int n2, double lx, double ly) {
  check_resolution(n1);
  check_resolution(n2);
  GridSpec g;
  g.kind = GridKind::DirichletRect2D;
  g.dim = 2;
  g.n = {n1, n2, 1};
  g.extent = {{{0.0, lx}, {0.0, ly}, {0, 0}}};
  return g;
}

GridSpec GridSpec::gs_rect2d(int nr, int nz, double r0, double r1, double z0, double z1) {
  check_resolution(nr);
  check_resolution(nz);
  if (r0 <= 0.0) throw std::invalid_argument("gs-rect2d requires r > 0");
  GridSpec g;
  g.kind = GridKind::GsRect2D;
  g.dim = 2;
  g.n = {nr, nz, 1};
  g.extent = {{{r0, r1}, {z0, z1}, {0, 0}}};
  return g;
}

GridSpec GridSpec::periodic_line1d(int n) {
  check_resolution(n);
  GridSpec g;
  g.kind = GridKind::PeriodicLine1D;
  g.dim = 1;
  g.n = {n, 1, 1};
  g.extent = {{{0.0, kTwoPi}, {0, 0}, {0, 0}}};
  return g;
}

GridSpec GridSpec::torus3d(int n) {
  check_resolution(n);
  GridSpec g;
  g.kind = GridKind::Torus3D;
  g.dim = 3;
  g.n = {n, n, n};
  g.extent = {{{0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0}}};
  return g;
}

bool GridSpec::periodic() const {
  return kind == GridKind::Torus2D || kind == GridKind::PeriodicLine1D ||
         kind == GridKind::Torus3D;
}

double GridSpec::spacing(int axis) const {
  const double L = length(axis);
  return periodic() ? L / n[axis] : L / (n[axis] - 1);
}

std::size_t GridSpec::size() const {
  std::size_t s = 1;
  for (int a = 0; a < dim; ++a) s *= static_cast<std::size_t>(n[a]);
  return s;
}

double GridSpec::cell_volume() const {
  double h = 1.0;
  for (int a = 0; a < dim; ++a) h *= spacing(a);
  return h;
}

bool GridSpec::same_as(const GridSpec& o) const {
  if (kind != o.kind || dim != o.dim) return false;
  for (int a = 0; a < dim; ++a) {
    if (n[a] != o.n[a]) return false;
    if (extent[a] != o.extent[a]) return false;
  }
  return true;
}

Measure Measure::unit(const GridSpec& g) {
  Measure mu;
  mu.grid = g;
  mu.kind = WeightKind::Unit;
  mu.m.assign(g.size(), 1.0);
  mu.w.assign(g.size(), g.cell_volume());
  if (g.bounded()) {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j) {
        double f = 1.0;
        if (i == 0 || i == g.n[0] - 1) f *= 0.5;
        if (j == 0 || j == g.n[1] - 1) f *= 0.5;
        mu.w[g.index(i, j)] *= f;
      }
  }
  return mu;
}

Measure Measure::inverse_r(const GridSpec& g) {
  if (g.kind != GridKind::GsRect2D)
    throw std::invalid_argument("inverse-r measure requires a gs-rect2d grid");
  Measure mu;
  mu.grid = g;
  mu.kind = WeightKind::InverseR;
  mu.m.resize(g.size());
  mu.w.resize(g.size());
  const double hv = g.cell_volume();
  for (int i = 0; i < g.n[0]; ++i) {
    const double r = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      double f = 1.0;
      if (i == 0 || i == g.n[0] - 1) f *= 0.5;
      if (j == 0 || j == g.n[1] - 1) f *= 0.5;
      const std::size_t idx = g.index(i, j);
      mu.m[idx] = 1.0 / r;
      mu.w[idx] = f * hv / r;
    }
  }
  return mu;
}

ScalarField::ScalarField(const GridSpec& g, std::vector<double> values)
    : grid(g), v(std::move(values)) {
  if (v.size() != g.size())
    throw std::invalid_argument("field length does not match grid size");
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where) {
  if (!a.same_as(b)) throw std::invalid_argument(std::string(where) + ": grid mismatch");
}

void require_finite(const std::vector<double>& v, const char* where) {
  for (double x : v)
    if (!std::isfinite(x))
      throw std::runtime_error(std::string(where) + ": non-finite field value");
}

} // namespace metrix
