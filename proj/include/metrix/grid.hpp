#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <type_traits>
#include <vector>

namespace metrix {

enum class GridKind {
  Torus2D,         // [0,2pi]^2, periodic
  DirichletRect2D, // rectangle, boundary nodes included
  GsRect2D,        // (r,z) rectangle, boundary nodes included
  PeriodicLine1D,  // [0,2pi], periodic
  Torus3D,         // [0,1]^3, periodic
};

const char* grid_kind_name(GridKind k);
GridKind grid_kind_from_name(const std::string& name);

/// Structured grid descriptor. Periodic axes store n nodes over [lo,hi)
/// with spacing (hi-lo)/n; bounded axes include both endpoints with
/// spacing (hi-lo)/(n-1).
struct GridSpec {
  GridKind kind;
  int dim = 0;
  std::array<int, 3> n{1, 1, 1};
  std::array<std::array<double, 2>, 3> extent{{{0, 0}, {0, 0}, {0, 0}}};

  static GridSpec torus2d(int n);
  static GridSpec dirichlet_rect2d(int n1, int n2, double lx = 1.0, double ly = 1.0);
  static GridSpec gs_rect2d(int nr, int nz, double r0 = 1.0, double r1 = 7.0,
                            double z0 = -9.5, double z1 = 9.5);
  static GridSpec periodic_line1d(int n);
  static GridSpec torus3d(int n);

  bool periodic() const;
  bool bounded() const { return !periodic(); }
  double length(int axis) const { return extent[axis][1] - extent[axis][0]; }
  double spacing(int axis) const;
  double coord(int axis, int i) const { return extent[axis][0] + i * spacing(axis); }
  std::size_t size() const;
  double cell_volume() const; // prod of spacings

  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * n[1] + j; }
  std::size_t index(int i, int j, int k) const {
    return (static_cast<std::size_t>(i) * n[1] + j) * static_cast<std::size_t>(n[2]) + k;
  }

  bool same_as(const GridSpec& o) const;
};

enum class WeightKind { Unit, InverseR };

/// Volume weight m(x) plus ready-to-use quadrature weights
/// w(x) = m(x) * prod(h_i), with a trapezoid factor 1/2 at each bounded-axis
/// boundary node.
struct Measure {
  GridSpec grid;
  WeightKind kind = WeightKind::Unit;
  std::vector<double> m;
  std::vector<double> w;

  static Measure unit(const GridSpec& g);
  static Measure inverse_r(const GridSpec& g); // gs-rect2d only
};

struct ScalarField {
  GridSpec grid;
  std::vector<double> v;

  ScalarField() = default;
  explicit ScalarField(const GridSpec& g) : grid(g), v(g.size(), 0.0) {}
  ScalarField(const GridSpec& g, std::vector<double> values);

  double& operator[](std::size_t i) { return v[i]; }
  double operator[](std::size_t i) const { return v[i]; }
  std::size_t size() const { return v.size(); }

  template <class Fn>
  static ScalarField sample(const GridSpec& g, Fn f);
};

/// Component-major storage: component c occupies v[c*grid.size() ... ).
struct VectorField {
  GridSpec grid;
  int comps = 0;
  std::vector<double> v;

  VectorField() = default;
  VectorField(const GridSpec& g, int c) : grid(g), comps(c), v(g.size() * c, 0.0) {}

  double* comp(int c) { return v.data() + static_cast<std::size_t>(c) * grid.size(); }
  const double* comp(int c) const { return v.data() + static_cast<std::size_t>(c) * grid.size(); }
  std::size_t size() const { return grid.size(); }
};

template <class Fn>
ScalarField ScalarField::sample(const GridSpec& g, Fn f) {
  ScalarField out(g);
  if constexpr (std::is_invocable_r_v<double, Fn, double, double, double>) {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k)
          out.v[g.index(i, j, k)] = f(g.coord(0, i), g.coord(1, j), g.coord(2, k));
  } else if constexpr (std::is_invocable_r_v<double, Fn, double, double>) {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j) out.v[g.index(i, j)] = f(g.coord(0, i), g.coord(1, j));
  } else {
    for (int i = 0; i < g.n[0]; ++i) out.v[i] = f(g.coord(0, i));
  }
  return out;
}

void require_same_grid(const GridSpec& a, const GridSpec& b, const char* where);
void require_finite(const std::vector<double>& v, const char* where);

} // namespace metrix
