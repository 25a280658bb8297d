#include "spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <stdexcept>

namespace metrix::spectral {

namespace {

// Plans operate in place on cache-owned, fftw-aligned scratch buffers
// (alignment keeps the SIMD code paths); callers' data is copied through.
// One mutex guards lookup and execution; transforms are serialized, which
// keeps concurrent callers safe.
std::mutex g_plan_mutex;

struct PlanKey {
  std::array<int, 4> v;
  bool operator<(const PlanKey& o) const { return v < o.v; }
};

struct C2cEntry {
  fftw_plan plan = nullptr;
  fftw_complex* buf = nullptr;
  std::size_t n = 0;
};

C2cEntry& cached_c2c(int rank, const int* dims, int sign) {
  static std::map<PlanKey, C2cEntry> cache;
  PlanKey key{{rank * 10 + (sign < 0 ? 0 : 1), dims[0], rank > 1 ? dims[1] : 1,
               rank > 2 ? dims[2] : 1}};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  C2cEntry entry;
  entry.n = 1;
  for (int r = 0; r < rank; ++r) entry.n *= static_cast<std::size_t>(dims[r]);
  entry.buf = fftw_alloc_complex(entry.n);
  entry.plan = fftw_plan_dft(rank, dims, entry.buf, entry.buf,
                             sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!entry.plan) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(key, entry).first->second;
}

struct R2rEntry {
  fftw_plan plan = nullptr;
  double* buf = nullptr;
  std::size_t n = 0;
};

R2rEntry& cached_dst2(int n1, int n2) {
  static std::map<PlanKey, R2rEntry> cache;
  PlanKey key{{99, n1, n2, 0}};
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  R2rEntry entry;
  entry.n = static_cast<std::size_t>(n1) * n2;
  entry.buf = fftw_alloc_real(entry.n);
  const int dims[2] = {n1, n2};
  const fftw_r2r_kind kinds[2] = {FFTW_RODFT00, FFTW_RODFT00};
  entry.plan = fftw_plan_r2r(2, dims, entry.buf, entry.buf, kinds, FFTW_ESTIMATE);
  if (!entry.plan) throw std::runtime_error("fftw plan creation failed");
  return cache.emplace(key, entry).first->second;
}

} // namespace

void fft(int rank, const int* dims, cbuf& data, int sign) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  C2cEntry& e = cached_c2c(rank, dims, sign);
  std::memcpy(e.buf, data.data(), e.n * sizeof(fftw_complex));
  fftw_execute(e.plan);
  std::memcpy(data.data(), e.buf, e.n * sizeof(fftw_complex));
}

void dst2(int n1, int n2, std::vector<double>& data) {
  std::lock_guard<std::mutex> lock(g_plan_mutex);
  R2rEntry& e = cached_dst2(n1, n2);
  std::memcpy(e.buf, data.data(), e.n * sizeof(double));
  fftw_execute(e.plan);
  std::memcpy(data.data(), e.buf, e.n * sizeof(double));
}

cbuf forward(const GridSpec& g, const std::vector<double>& f) {
  cbuf data(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) data[i] = f[i];
  fft(g.dim, g.n.data(), data, -1);
  return data;
}

std::vector<double> backward(const GridSpec& g, cbuf& data) {
  fft(g.dim, g.n.data(), data, +1);
  std::vector<double> out(data.size());
  const double scale = 1.0 / static_cast<double>(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out[i] = data[i].real() * scale;
  return out;
}

std::vector<double> derivative(const GridSpec& g, const std::vector<double>& f, int axis) {
  cbuf data = forward(g, f);
  std::size_t idx = 0;
  auto mult = [&](int j) {
    return std::complex<double>(0.0, effective_wavenumber(g, axis, j));
  };
  if (g.dim == 1) {
    for (int i = 0; i < g.n[0]; ++i, ++idx) data[idx] *= mult(i);
  } else if (g.dim == 2) {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j, ++idx) data[idx] *= mult(axis == 0 ? i : j);
  } else {
    for (int i = 0; i < g.n[0]; ++i)
      for (int j = 0; j < g.n[1]; ++j)
        for (int k = 0; k < g.n[2]; ++k, ++idx)
          data[idx] *= mult(axis == 0 ? i : (axis == 1 ? j : k));
  }
  return backward(g, data);
}

namespace {

// iterate over all modes, calling fn(flat_index, axis_index[3])
template <class Fn>
void for_each_mode(const GridSpec& g, Fn fn) {
  std::size_t idx = 0;
  int ai[3] = {0, 0, 0};
  const int n0 = g.n[0], n1 = g.dim > 1 ? g.n[1] : 1, n2 = g.dim > 2 ? g.n[2] : 1;
  for (int i = 0; i < n0; ++i) {
    ai[0] = i;
    for (int j = 0; j < n1; ++j) {
      ai[1] = j;
      for (int k = 0; k < n2; ++k, ++idx) {
        ai[2] = k;
        fn(idx, ai);
      }
    }
  }
}



} // namespace

std::vector<std::vector<double>> gradient_periodic(const GridSpec& g,
                                                   const std::vector<double>& f) {
  const cbuf base = forward(g, f);
  std::vector<std::vector<double>> out(g.dim);
  cbuf work(base.size());
  for (int a = 0; a < g.dim; ++a) {
    for_each_mode(g, [&](std::size_t idx, const int* ai) {
      work[idx] = base[idx] * std::complex<double>(0.0, effective_wavenumber(g, a, ai[a]));
    });
    out[a] = backward(g, work);
  }
  return out;
}

std::vector<double> divergence_periodic(const GridSpec& g, const VectorField& F) {
  cbuf acc(g.size(), {0.0, 0.0});
  for (int a = 0; a < g.dim; ++a) {
    std::vector<double> comp(F.comp(a), F.comp(a) + g.size());
    cbuf hat = forward(g, comp);
    for_each_mode(g, [&](std::size_t idx, const int* ai) {
      acc[idx] += hat[idx] * std::complex<double>(0.0, effective_wavenumber(g, a, ai[a]));
    });
  }
  return backward(g, acc);
}

Spectrum3 forward3(const VectorField& F) {
  Spectrum3 s;
  const GridSpec& g = F.grid;
  for (int c = 0; c < 3; ++c) {
    std::vector<double> comp(F.comp(c), F.comp(c) + g.size());
    s.c[c] = forward(g, comp);
  }
  return s;
}

VectorField backward3(const GridSpec& g, Spectrum3& s) {
  VectorField out(g, 3);
  for (int c = 0; c < 3; ++c) {
    std::vector<double> comp = backward(g, s.c[c]);
    std::copy(comp.begin(), comp.end(), out.comp(c));
  }
  return out;
}

void curl_spectrum(const GridSpec& g, Spectrum3& s) {
  std::size_t idx = 0;
  auto kn = [&](int axis, int j) { return effective_wavenumber(g, axis, j); };
  for (int i = 0; i < g.n[0]; ++i) {
    const double k1 = kn(0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double k2 = kn(1, j);
      for (int k = 0; k < g.n[2]; ++k, ++idx) {
        const double k3 = kn(2, k);
        const std::complex<double> I(0.0, 1.0);
        const std::complex<double> f1 = s.c[0][idx], f2 = s.c[1][idx], f3 = s.c[2][idx];
        s.c[0][idx] = I * (k2 * f3 - k3 * f2);
        s.c[1][idx] = I * (k3 * f1 - k1 * f3);
        s.c[2][idx] = I * (k1 * f2 - k2 * f1);
      }
    }
  }
}

double div_residual(const GridSpec& g, const Spectrum3& s) {
  double worst = 0.0;
  double norm2 = 0.0;
  std::size_t idx = 0;
  for (int i = 0; i < g.n[0]; ++i) {
    const double k1 = effective_wavenumber(g, 0, i);
    for (int j = 0; j < g.n[1]; ++j) {
      const double k2 = effective_wavenumber(g, 1, j);
      for (int k = 0; k < g.n[2]; ++k, ++idx) {
        const double k3 = effective_wavenumber(g, 2, k);
        const double kk = std::sqrt(k1 * k1 + k2 * k2 + k3 * k3);
        const std::complex<double> dot =
            k1 * s.c[0][idx] + k2 * s.c[1][idx] + k3 * s.c[2][idx];
        if (kk > 0.0) worst = std::max(worst, std::abs(dot) / kk);
        norm2 += std::norm(s.c[0][idx]) + std::norm(s.c[1][idx]) + std::norm(s.c[2][idx]);
      }
    }
  }
  const double scale = std::sqrt(norm2);
  return scale > 0.0 ? worst / scale : 0.0;
}

} // namespace metrix::spectral
