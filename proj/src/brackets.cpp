#include "metrix/brackets.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "metrix/operators.hpp"
#include "spectral.hpp"

namespace metrix {

BracketRhs::BracketRhs(Kind k, EntropySpec s, HamiltonianSpec h, Measure m, KappaKind kap)
    : kind(k), entropy(std::move(s)), hamiltonian(std::move(h)), mu(std::move(m)), kappa(kap) {
  const GridSpec& g = mu.grid;
  const bool scalar2d = g.dim == 2;
  switch (kind) {
    case Kind::Double:
    case Kind::Projector:
    case Kind::CollisionDivGrad:
    case Kind::DiffusionDivGrad:
      if (!scalar2d) throw std::invalid_argument("bracket requires a 2d scalar grid");
      break;
    case Kind::Laplacian:
      if (g.dim == 3) throw std::invalid_argument("laplacian bracket requires a scalar grid");
      break;
    case Kind::Magnetofrictional:
      if (g.kind != GridKind::Torus3D)
        throw std::invalid_argument("magnetofrictional bracket requires torus3d");
      break;
  }
  if (hamiltonian.kind == HamiltonianSpec::Kind::LinearWeighted && g.dim == 2)
    fixed_grad_h = std::make_shared<VectorField>(gradient(hamiltonian.weight));
}

ScalarField BracketRhs::operator()(const ScalarField& u) const {
  switch (kind) {
    case Kind::Double: return rhs_double(*this, u);
    case Kind::Projector: return rhs_projector(*this, u);
    case Kind::CollisionDivGrad: return rhs_collision_div_grad(*this, u);
    case Kind::DiffusionDivGrad: return rhs_diffusion_div_grad(*this, u);
    case Kind::Laplacian: return rhs_laplacian(*this, u);
    case Kind::Magnetofrictional:
      throw std::invalid_argument("magnetofrictional bracket acts on vector fields");
  }
  throw std::logic_error("unreachable");
}

VectorField BracketRhs::operator()(const VectorField& B) const {
  if (kind != Kind::Magnetofrictional)
    throw std::invalid_argument("vector rhs requires the magnetofrictional bracket");
  return rhs_magnetofrictional(B);
}

ScalarField rhs_double(const BracketRhs& b, const ScalarField& u) {
  const GridSpec& g = u.grid;
  const VectorField gh = b.fixed_grad_h
                             ? *b.fixed_grad_h
                             : gradient(hamiltonian_derivative(b.hamiltonian, u, b.mu));
  const ScalarField gfield = entropy_derivative(b.entropy, u, b.mu);
  const VectorField gg = gradient(gfield);
  // X_h = (d2 h, -d1 h); flux = X_h (X_h . grad g)
  VectorField flux(g, 2);
  const double* h1 = gh.comp(0);
  const double* h2 = gh.comp(1);
  const double* g1 = gg.comp(0);
  const double* g2 = gg.comp(1);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x1 = h2[i], x2 = -h1[i];
    const double s = x1 * g1[i] + x2 * g2[i];
    flux.comp(0)[i] = x1 * s;
    flux.comp(1)[i] = x2 * s;
  }
  return divergence_mu(flux, b.mu);
}

ScalarField rhs_projector(const BracketRhs& b, const ScalarField& u) {
  const ScalarField h = hamiltonian_derivative(b.hamiltonian, u, b.mu);
  const ScalarField gfield = entropy_derivative(b.entropy, u, b.mu);
  const double hh = inner(h, h, b.mu);
  if (hh <= 0.0)
    throw std::domain_error("rhs_projector: dH/du has zero norm");
  const double c = inner(h, gfield, b.mu) / hh;
  ScalarField out(u.grid);
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = -(gfield.v[i] - c * h.v[i]);
  return out;
}

namespace {

struct Mat2 {
  // symmetric storage unnecessary; keep full 2x2
  double a11 = 0, a12 = 0, a21 = 0, a22 = 0;
};

} // namespace

ScalarField rhs_collision_div_grad(const BracketRhs& b, const ScalarField& u) {
  const GridSpec& g = u.grid;
  const Measure& mu = b.mu;
  // a(x) = grad dH/du
  const VectorField a = b.fixed_grad_h
                            ? *b.fixed_grad_h
                            : gradient(hamiltonian_derivative(b.hamiltonian, u, mu));
  const VectorField du = gradient(u);
  const MFunction mf = m_function(b.entropy, g);

  const std::size_t n = g.size();
  std::vector<double> M(n), w1(n), w2(n);
  for (int i = 0; i < g.n[0]; ++i) {
    const double r = g.coord(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const std::size_t c = g.index(i, j);
      const double y = u.v[c];
      M[c] = mf.M(r, y);
      w1[c] = du.comp(0)[c] + M[c] * mf.cross(0, r, y);
      w2[c] = du.comp(1)[c] + M[c] * mf.cross(1, r, y);
    }
  }

  // Global moments over x' (quadrature weights of mu). With b = a(x'),
  // M' = M(x'), w' = (w1,w2)(x'):
  //   m0 = sum M', m1 = sum b M', m2 = sum b (x) b M'
  //   n0 = sum w', W = sum w' (x) b, n2 = sum |b|^2 w', n3 = sum b (b.w')
  double m0 = 0, m1_1 = 0, m1_2 = 0, m2_11 = 0, m2_12 = 0, m2_22 = 0;
  double n0_1 = 0, n0_2 = 0;
  Mat2 W;
  double n2_1 = 0, n2_2 = 0, n3_1 = 0, n3_2 = 0;
  const double* a1 = a.comp(0);
  const double* a2 = a.comp(1);
  for (std::size_t c = 0; c < n; ++c) {
    const double wq = mu.w[c];
    const double b1 = a1[c], b2 = a2[c];
    const double Mp = M[c] * wq;
    m0 += Mp;
    m1_1 += b1 * Mp;
    m1_2 += b2 * Mp;
    m2_11 += b1 * b1 * Mp;
    m2_12 += b1 * b2 * Mp;
    m2_22 += b2 * b2 * Mp;
    const double v1 = w1[c] * wq, v2 = w2[c] * wq;
    n0_1 += v1;
    n0_2 += v2;
    W.a11 += v1 * b1;
    W.a12 += v1 * b2;
    W.a21 += v2 * b1;
    W.a22 += v2 * b2;
    const double bb = b1 * b1 + b2 * b2;
    n2_1 += bb * v1;
    n2_2 += bb * v2;
    const double bw = b1 * v1 + b2 * v2;
    n3_1 += b1 * bw;
    n3_2 += b2 * bw;
  }
  const double trW = W.a11 + W.a22;
  const double trm2 = m2_11 + m2_22;

  // Pointwise assembly of the flux G = D_s(x) w(x) - M(x) F_s(x), where
  //   D_s = Q2(a) m0 - 2 (a.m1) I + a (x) m1 + m1 (x) a + tr(m2) I - m2
  //   F_s = Q2(a) n0 - 2 W a + tr(W) a + W^T a + n2 - n3
  VectorField flux(g, 2);
  for (std::size_t c = 0; c < n; ++c) {
    const double ax = a1[c], ay = a2[c];
    const double aa = ax * ax + ay * ay;
    const double adotm1 = ax * m1_1 + ay * m1_2;
    // D_s entries
    const double D11 = (aa - ax * ax) * m0 - 2.0 * adotm1 + 2.0 * ax * m1_1 + trm2 - m2_11;
    const double D22 = (aa - ay * ay) * m0 - 2.0 * adotm1 + 2.0 * ay * m1_2 + trm2 - m2_22;
    const double D12 = -ax * ay * m0 + ax * m1_2 + ay * m1_1 - m2_12;
    // F_s vector
    const double q_n0_1 = aa * n0_1 - ax * (ax * n0_1 + ay * n0_2);
    const double q_n0_2 = aa * n0_2 - ay * (ax * n0_1 + ay * n0_2);
    const double Wa_1 = W.a11 * ax + W.a12 * ay;
    const double Wa_2 = W.a21 * ax + W.a22 * ay;
    const double Wta_1 = W.a11 * ax + W.a21 * ay;
    const double Wta_2 = W.a12 * ax + W.a22 * ay;
    const double F1 = q_n0_1 - 2.0 * Wa_1 + trW * ax + Wta_1 + n2_1 - n3_1;
    const double F2 = q_n0_2 - 2.0 * Wa_2 + trW * ay + Wta_2 + n2_2 - n3_2;
    flux.comp(0)[c] = D11 * w1[c] + D12 * w2[c] - M[c] * F1;
    flux.comp(1)[c] = D12 * w1[c] + D22 * w2[c] - M[c] * F2;
  }
  return divergence_mu(flux, mu);
}

ScalarField rhs_diffusion_div_grad(const BracketRhs& b, const ScalarField& u) {
  const GridSpec& g = u.grid;
  const ScalarField gfield = entropy_derivative(b.entropy, u, b.mu);
  const VectorField gh = b.fixed_grad_h
                             ? *b.fixed_grad_h
                             : gradient(hamiltonian_derivative(b.hamiltonian, u, b.mu));
  const VectorField gg = gradient(gfield);
  std::vector<double> kap(g.size(), 1.0);
  if (b.kappa == KappaKind::M) {
    const MFunction mf = m_function(b.entropy, g);
    for (int i = 0; i < g.n[0]; ++i) {
      const double r = g.coord(0, i);
      for (int j = 0; j < g.n[1]; ++j) {
        const std::size_t c = g.index(i, j);
        kap[c] = mf.M(r, u.v[c]);
      }
    }
  }
  VectorField flux(g, 2);
  const double* h1 = gh.comp(0);
  const double* h2 = gh.comp(1);
  const double* g1 = gg.comp(0);
  const double* g2 = gg.comp(1);
  for (std::size_t c = 0; c < g.size(); ++c) {
    // Q2(grad h) = |grad h|^2 I - grad h (x) grad h
    const double hh = h1[c] * h1[c] + h2[c] * h2[c];
    const double q11 = hh - h1[c] * h1[c];
    const double q22 = hh - h2[c] * h2[c];
    const double q12 = -h1[c] * h2[c];
    flux.comp(0)[c] = kap[c] * (q11 * g1[c] + q12 * g2[c]);
    flux.comp(1)[c] = kap[c] * (q12 * g1[c] + q22 * g2[c]);
  }
  return divergence_mu(flux, b.mu);
}

ScalarField rhs_laplacian(const BracketRhs& b, const ScalarField& u) {
  const ScalarField gfield = entropy_derivative(b.entropy, u, b.mu);
  return divergence_mu(gradient(gfield), b.mu);
}

VectorField magnetofrictional_velocity(const VectorField& B) {
  const VectorField J = curl3d(B);
  VectorField V(B.grid, 3);
  const std::size_t n = B.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double j1 = J.comp(0)[i], j2 = J.comp(1)[i], j3 = J.comp(2)[i];
    const double b1 = B.comp(0)[i], b2 = B.comp(1)[i], b3 = B.comp(2)[i];
    V.comp(0)[i] = j2 * b3 - j3 * b2;
    V.comp(1)[i] = j3 * b1 - j1 * b3;
    V.comp(2)[i] = j1 * b2 - j2 * b1;
  }
  return V;
}

VectorField rhs_magnetofrictional(const VectorField& B) {
  if (B.grid.kind != GridKind::Torus3D || B.comps != 3)
    throw std::invalid_argument("rhs_magnetofrictional: torus3d vector field required");
  const GridSpec& g = B.grid;
  spectral::Spectrum3 s = spectral::forward3(B);
  double scale = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g.size(); ++i)
      scale = std::max(scale, std::abs(B.comp(c)[i]));
  const double nrm = static_cast<double>(g.size());
  const double mean_mag =
      std::max({std::abs(s.c[0][0]), std::abs(s.c[1][0]), std::abs(s.c[2][0])}) / nrm;
  if (scale > 0.0 && mean_mag > 1e-10 * scale)
    throw std::invalid_argument("rhs_magnetofrictional: field has a nonzero mean component");
  if (spectral::div_residual(g, s) > 1e-10)
    throw std::invalid_argument("rhs_magnetofrictional: field is not divergence-free");

  spectral::curl_spectrum(g, s);
  const VectorField J = spectral::backward3(g, s);
  VectorField E(g, 3); // ((curl B) x B) x B
  const std::size_t n = g.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double j1 = J.comp(0)[i], j2 = J.comp(1)[i], j3 = J.comp(2)[i];
    const double b1 = B.comp(0)[i], b2 = B.comp(1)[i], b3 = B.comp(2)[i];
    const double v1 = j2 * b3 - j3 * b2;
    const double v2 = j3 * b1 - j1 * b3;
    const double v3 = j1 * b2 - j2 * b1;
    E.comp(0)[i] = v2 * b3 - v3 * b2;
    E.comp(1)[i] = v3 * b1 - v1 * b3;
    E.comp(2)[i] = v1 * b2 - v2 * b1;
  }
  spectral::Spectrum3 e = spectral::forward3(E);
  spectral::curl_spectrum(g, e);
  return spectral::backward3(g, e);
}

} // namespace metrix
