#pragma once

// Internal FFT helpers. Complex spectral buffers never leave this layer.
// Real fields use r2c/c2r transforms with the last axis stored reduced
// (n/2+1 modes).

#include <complex>
#include <vector>

#include "metrix/grid.hpp"

namespace metrix::spectral {

using cbuf = std::vector<std::complex<double>>;

// Reduced-layout spectrum of a real field.
struct RSpectrum {
  cbuf c;
};

RSpectrum forward(const GridSpec& g, const std::vector<double>& f);
// Inverse transform, normalized; consumes the spectrum buffer.
std::vector<double> backward(const GridSpec& g, RSpectrum& s);

// DST-I (FFTW RODFT00) along both axes of an n1 x n2 interior block,
// unnormalized (round trip multiplies by 4(n1+1)(n2+1)).
void dst2(int n1, int n2, std::vector<double>& data);

// Integer frequency index for position j on an n-point periodic axis.
inline int freq_index(int j, int n) { return (j <= n / 2) ? j : j - n; }

// Physical wavenumber of mode j on axis `axis` (full-layout index).
inline double wavenumber(const GridSpec& g, int axis, int j) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  return kTwoPi * freq_index(j, g.n[axis]) / g.length(axis);
}

// Wavenumber used by every spectral differential operator: the unresolved
// Nyquist mode is treated as constant (zero derivative).
inline double effective_wavenumber(const GridSpec& g, int axis, int j) {
  if (g.n[axis] % 2 == 0 && j == g.n[axis] / 2) return 0.0;
  return wavenumber(g, axis, j);
}

// Number of stored modes along the (reduced) last axis.
inline int reduced_last(const GridSpec& g) { return g.n[g.dim - 1] / 2 + 1; }

// Iterate the reduced layout: fn(flat_index, axis_index[3]); axis indices
// are full-layout positions (the last axis covers 0..n/2 only).
template <class Fn>
void for_each_rmode(const GridSpec& g, Fn fn) {
  const int last = g.dim - 1;
  const int n0 = g.dim > 1 ? g.n[0] : 1;
  const int n1 = g.dim > 2 ? g.n[1] : 1;
  const int nr = g.n[last] / 2 + 1;
  std::size_t idx = 0;
  int ai[3] = {0, 0, 0};
  for (int i = 0; i < n0; ++i) {
    ai[0] = i;
    for (int j = 0; j < n1; ++j) {
      ai[1] = j;
      for (int k = 0; k < nr; ++k, ++idx) {
        ai[last] = k;
        if (g.dim == 1) ai[0] = k;
        fn(idx, ai);
      }
    }
  }
}

// Spectral partial derivative of a real field on a fully periodic grid.
std::vector<double> derivative(const GridSpec& g, const std::vector<double>& f, int axis);

// All partial derivatives sharing one forward transform.
std::vector<std::vector<double>> gradient_periodic(const GridSpec& g,
                                                   const std::vector<double>& f);

// Spectral divergence (dim forward transforms, one inverse).
std::vector<double> divergence_periodic(const GridSpec& g, const VectorField& F);

// Real multiplier application: out_hat(k) = mult(k1,k2,k3) f_hat(k).
template <class Fn>
std::vector<double> apply_multiplier(const GridSpec& g, const std::vector<double>& f,
                                     Fn mult) {
  RSpectrum s = forward(g, f);
  for_each_rmode(g, [&](std::size_t idx, const int* ai) {
    const double k1 = wavenumber(g, 0, ai[0]);
    const double k2 = g.dim > 1 ? wavenumber(g, 1, ai[1]) : 0.0;
    const double k3 = g.dim > 2 ? wavenumber(g, 2, ai[2]) : 0.0;
    s.c[idx] *= mult(k1, k2, k3);
  });
  return backward(g, s);
}

// Three-component spectra for torus3d vector fields (reduced layout).
struct Spectrum3 {
  RSpectrum c[3];
};
Spectrum3 forward3(const VectorField& F);
VectorField backward3(const GridSpec& g, Spectrum3& s);
// In place: s <- i k x s (Nyquist derivative modes zeroed).
void curl_spectrum(const GridSpec& g, Spectrum3& s);
// max over modes of |k_hat . F_hat| / ||F_hat||.
double div_residual(const GridSpec& g, const Spectrum3& s);

} // namespace metrix::spectral
