#include "metrix/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spectral.hpp"

namespace metrix {

double integrate(const ScalarField& f, const Measure& mu) {
  require_same_grid(f.grid, mu.grid, "integrate");
  double s = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) s += f.v[i] * mu.w[i];
  return s;
}

double inner(const ScalarField& a, const ScalarField& b, const Measure& mu) {
  require_same_grid(a.grid, b.grid, "inner");
  require_same_grid(a.grid, mu.grid, "inner");
  double s = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) s += a.v[i] * b.v[i] * mu.w[i];
  return s;
}

double inner(const VectorField& a, const VectorField& b, const Measure& mu) {
  require_same_grid(a.grid, b.grid, "inner");
  if (a.comps != b.comps) throw std::invalid_argument("inner: component mismatch");
  double s = 0.0;
  const std::size_t n = a.size();
  for (int c = 0; c < a.comps; ++c) {
    const double* pa = a.comp(c);
    const double* pb = b.comp(c);
    for (std::size_t i = 0; i < n; ++i) s += pa[i] * pb[i] * mu.w[i];
  }
  return s;
}

double norm_l2(const ScalarField& f, const Measure& mu) { return std::sqrt(inner(f, f, mu)); }
double norm_l2(const VectorField& f, const Measure& mu) { return std::sqrt(inner(f, f, mu)); }

double domain_mean(const ScalarField& f, const Measure& mu) {
  double vol = 0.0;
  for (double w : mu.w) vol += w;
  return integrate(f, mu) / vol;
}

namespace {

// 1D second-order difference along one axis of a structured array,
// one-sided at bounded ends. `inv2h` = 1/(2h).
void fd_derivative_axis(const GridSpec& g, const std::vector<double>& f, int axis,
                        std::vector<double>& out) {
  const int na = g.n[axis];
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  // iterate over all lines along `axis`
  std::size_t stride = 1;
  for (int a = axis + 1; a < g.dim; ++a) stride *= static_cast<std::size_t>(g.n[a]);
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(g.n[a]);
  std::size_t inner_count = stride;
  const std::size_t block = stride * static_cast<std::size_t>(na);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < inner_count; ++in) {
      const std::size_t base = o * block + in;
      auto at = [&](int i) -> double { return f[base + static_cast<std::size_t>(i) * stride]; };
      auto put = [&](int i, double val) { out[base + static_cast<std::size_t>(i) * stride] = val; };
      put(0, (-3.0 * at(0) + 4.0 * at(1) - at(2)) * inv2h);
      for (int i = 1; i < na - 1; ++i) put(i, (at(i + 1) - at(i - 1)) * inv2h);
      put(na - 1, (3.0 * at(na - 1) - 4.0 * at(na - 2) + at(na - 3)) * inv2h);
    }
  }
}

// Transpose of fd_derivative_axis (scatter form): out = D^T g.
void fd_derivative_axis_transpose(const GridSpec& g, const std::vector<double>& f, int axis,
                                  std::vector<double>& out) {
  const int na = g.n[axis];
  const double inv2h = 1.0 / (2.0 * g.spacing(axis));
  std::size_t stride = 1;
  for (int a = axis + 1; a < g.dim; ++a) stride *= static_cast<std::size_t>(g.n[a]);
  std::size_t outer = 1;
  for (int a = 0; a < axis; ++a) outer *= static_cast<std::size_t>(g.n[a]);
  const std::size_t block = stride * static_cast<std::size_t>(na);
  for (std::size_t o = 0; o < outer; ++o) {
    for (std::size_t in = 0; in < stride; ++in) {
      const std::size_t base = o * block + in;
      auto at = [&](int i) -> double { return f[base + static_cast<std::size_t>(i) * stride]; };
      auto add = [&](int i, double val) { out[base + static_cast<std::size_t>(i) * stride] += val; };
      // row 0: (-3, 4, -1) / 2h
      add(0, -3.0 * at(0) * inv2h);
      add(1, 4.0 * at(0) * inv2h);
      add(2, -at(0) * inv2h);
      // interior rows i: (-1 at i-1, +1 at i+1) / 2h
      for (int i = 1; i < na - 1; ++i) {
        add(i - 1, -at(i) * inv2h);
        add(i + 1, at(i) * inv2h);
      }
      // row na-1: (1, -4, 3) / 2h at (na-3, na-2, na-1)
      add(na - 3, at(na - 1) * inv2h);
      add(na - 2, -4.0 * at(na - 1) * inv2h);
      add(na - 1, 3.0 * at(na - 1) * inv2h);
    }
  }
}

} // namespace

ScalarField derivative(const ScalarField& f, int axis) {
  if (axis < 0 || axis >= f.grid.dim) throw std::invalid_argument("derivative: bad axis");
  ScalarField out(f.grid);
  if (f.grid.periodic()) {
    out.v = spectral::derivative(f.grid, f.v, axis);
  } else {
    fd_derivative_axis(f.grid, f.v, axis, out.v);
  }
  return out;
}

VectorField gradient(const ScalarField& f) {
  VectorField out(f.grid, f.grid.dim);
  if (f.grid.periodic()) {
    const auto comps = spectral::gradient_periodic(f.grid, f.v);
    for (int a = 0; a < f.grid.dim; ++a)
      std::copy(comps[a].begin(), comps[a].end(), out.comp(a));
    return out;
  }
  for (int a = 0; a < f.grid.dim; ++a) {
    ScalarField d = derivative(f, a);
    std::copy(d.v.begin(), d.v.end(), out.comp(a));
  }
  return out;
}

ScalarField divergence_mu(const VectorField& F, const Measure& mu) {
  require_same_grid(F.grid, mu.grid, "divergence_mu");
  const GridSpec& g = F.grid;
  if (F.comps != g.dim) throw std::invalid_argument("divergence_mu: component mismatch");
  ScalarField out(g);
  if (g.periodic()) {
    // uniform weights: adjoint of the spectral derivative is its negative
    out.v = spectral::divergence_periodic(g, F);
    return out;
  }
  std::vector<double> weighted(g.size());
  std::vector<double> acc(g.size(), 0.0);
  for (int a = 0; a < g.dim; ++a) {
    const double* Fa = F.comp(a);
    for (std::size_t i = 0; i < g.size(); ++i) weighted[i] = Fa[i] * mu.w[i];
    fd_derivative_axis_transpose(g, weighted, a, acc);
  }
  for (std::size_t i = 0; i < g.size(); ++i) out.v[i] = -acc[i] / mu.w[i];
  return out;
}

namespace {

void require_torus3d(const GridSpec& g, const char* where) {
  if (g.kind != GridKind::Torus3D)
    throw std::invalid_argument(std::string(where) + ": torus3d grid required");
}

} // namespace

VectorField curl3d(const VectorField& F) {
  require_torus3d(F.grid, "curl3d");
  if (F.comps != 3) throw std::invalid_argument("curl3d: 3 components required");
  const GridSpec& g = F.grid;
  spectral::Spectrum3 s = spectral::forward3(F);
  spectral::curl_spectrum(g, s);
  return spectral::backward3(g, s);
}

double spectral_div_residual(const VectorField& F) {
  require_torus3d(F.grid, "spectral_div_residual");
  spectral::Spectrum3 s = spectral::forward3(F);
  return spectral::div_residual(F.grid, s);
}

VectorField vector_potential(const VectorField& B) {
  require_torus3d(B.grid, "vector_potential");
  const GridSpec& g = B.grid;
  double scale = 0.0, mean_mag = 0.0;
  for (int c = 0; c < 3; ++c) {
    double m = 0.0;
    const double* p = B.comp(c);
    for (std::size_t i = 0; i < g.size(); ++i) {
      m += p[i];
      scale = std::max(scale, std::abs(p[i]));
    }
    mean_mag = std::max(mean_mag, std::abs(m) / static_cast<double>(g.size()));
  }
  if (scale > 0.0 && mean_mag > 1e-10 * scale)
    throw std::invalid_argument("vector_potential: field has a nonzero mean component");
  if (spectral_div_residual(B) > 1e-10)
    throw std::invalid_argument("vector_potential: field is not divergence-free");
  spectral::Spectrum3 s = spectral::forward3(B);

  spectral::Spectrum3 a;
  for (int c = 0; c < 3; ++c) a.c[c].assign(g.size(), {0.0, 0.0});
  std::size_t idx = 0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double k1 = spectral::effective_wavenumber(g, 0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double k2 = spectral::effective_wavenumber(g, 1, j);
      for (int k = 0; k < g.n[2]; ++k, ++idx) {
        const double k3 = spectral::effective_wavenumber(g, 2, k);
        const double kk2 = k1 * k1 + k2 * k2 + k3 * k3;
        if (kk2 == 0.0) continue;
        // A_hat = i k x B_hat / |k|^2
        const std::complex<double> b1 = s.c[0][idx], b2 = s.c[1][idx], b3 = s.c[2][idx];
        const std::complex<double> I(0.0, 1.0);
        a.c[0][idx] = I * (k2 * b3 - k3 * b2) / kk2;
        a.c[1][idx] = I * (k3 * b1 - k1 * b3) / kk2;
        a.c[2][idx] = I * (k1 * b2 - k2 * b1) / kk2;
      }
    }
  }
  VectorField A(g, 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> comp = spectral::backward(g, a.c[c]);
    std::copy(comp.begin(), comp.end(), A.comp(c));
  }
  return A;
}

} // namespace metrix
