#include "metrix/findim.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <stdexcept>

namespace metrix {

namespace {

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

void normalize(std::vector<double>& a) {
  const double nn = norm(a);
  if (nn == 0.0) throw std::invalid_argument("zero vector");
  for (double& x : a) x /= nn;
}

// Orthonormal basis with e0 = h (Gram-Schmidt against the standard basis).
std::vector<std::vector<double>> basis_from(const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());
  std::vector<std::vector<double>> basis;
  basis.push_back(h);
  for (int cand = 0; cand < n && static_cast<int>(basis.size()) < n; ++cand) {
    std::vector<double> v(n, 0.0);
    v[cand] = 1.0;
    for (const auto& e : basis) {
      const double c = dot(v, e);
      for (int i = 0; i < n; ++i) v[i] -= c * e[i];
    }
    const double nn = norm(v);
    if (nn > 1e-10) {
      for (double& x : v) x /= nn;
      basis.push_back(std::move(v));
    }
  }
  if (static_cast<int>(basis.size()) != n)
    throw std::runtime_error("basis completion failed");
  return basis;
}

std::vector<double> build_k(const std::vector<double>& kvals,
                            const std::vector<double>& h) {
  const int n = static_cast<int>(h.size());
  if (static_cast<int>(kvals.size()) != n)
    throw std::invalid_argument("need one eigenvalue per dimension");
  if (std::abs(kvals[0]) > 1e-12)
    throw std::invalid_argument("the h-direction eigenvalue must be zero");
  for (double k : kvals)
    if (k < -1e-12) throw std::invalid_argument("K must be positive semidefinite");
  auto basis = basis_from(h);
  std::vector<double> K(static_cast<std::size_t>(n) * n, 0.0);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        K[static_cast<std::size_t>(i) * n + j] += kvals[m] * basis[m][i] * basis[m][j];
  return K;
}

std::vector<double> matvec(const std::vector<double>& K, const std::vector<double>& z) {
  const int n = static_cast<int>(z.size());
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += K[static_cast<std::size_t>(i) * n + j] * z[j];
  return out;
}

} // namespace

FinDimSystem FinDimSystem::example1(const std::vector<double>& kvals, std::vector<double> h,
                                    std::vector<double> s) {
  FinDimSystem sys;
  sys.kind = Kind::Example1;
  sys.n = static_cast<int>(h.size());
  if (static_cast<int>(s.size()) != sys.n) throw std::invalid_argument("h/s size mismatch");
  normalize(h);
  sys.K = build_k(kvals, h);
  sys.h = std::move(h);
  sys.s = std::move(s);
  return sys;
}

FinDimSystem FinDimSystem::example2(const std::vector<double>& kvals, std::vector<double> h) {
  FinDimSystem sys;
  sys.kind = Kind::Example2;
  sys.n = static_cast<int>(h.size());
  normalize(h);
  sys.K = build_k(kvals, h);
  sys.h = std::move(h);
  return sys;
}

FinDimSystem FinDimSystem::example3(std::vector<double> s, int n) {
  FinDimSystem sys;
  sys.kind = Kind::Example3;
  sys.n = n;
  if (static_cast<int>(s.size()) != n) throw std::invalid_argument("s size mismatch");
  if (norm(s) == 0.0) throw std::invalid_argument("s must be nonzero");
  sys.s = std::move(s);
  return sys;
}

std::vector<double> FinDimSystem::grad_entropy(const std::vector<double>& z) const {
  std::vector<double> g(n);
  switch (kind) {
    case Kind::Example1:
      for (int i = 0; i < n; ++i) g[i] = s[i] + z[i];
      break;
    case Kind::Example2: {
      const double zz = dot(z, z);
      const double f = 2.0 / ((1.0 + zz) * (1.0 + zz));
      for (int i = 0; i < n; ++i) g[i] = f * z[i];
      break;
    }
    case Kind::Example3:
      g = s;
      break;
  }
  return g;
}

std::vector<double> FinDimSystem::rhs(const std::vector<double>& z) const {
  if (static_cast<int>(z.size()) != n) throw std::invalid_argument("state size mismatch");
  switch (kind) {
    case Kind::Example1:
    case Kind::Example2: {
      std::vector<double> g = grad_entropy(z);
      std::vector<double> kz = matvec(K, g);
      for (double& x : kz) x = -x;
      return kz;
    }
    case Kind::Example3: {
      if (dot(z, s) >= 0.0)
        throw std::domain_error("example3 state left the half-space z.s < 0");
      const double zz = dot(z, z);
      const double zs = dot(z, s);
      std::vector<double> out(n);
      for (int i = 0; i < n; ++i) out[i] = -(zz * s[i] - z[i] * zs);
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

double FinDimSystem::entropy(const std::vector<double>& z) const {
  switch (kind) {
    case Kind::Example1: return dot(s, z) + 0.5 * dot(z, z);
    case Kind::Example2: {
      const double zz = dot(z, z);
      return zz / (1.0 + zz);
    }
    case Kind::Example3: return dot(s, z);
  }
  throw std::logic_error("unreachable");
}

double FinDimSystem::hamiltonian(const std::vector<double>& z) const {
  if (kind == Kind::Example3) return 0.5 * dot(z, z);
  return dot(h, z);
}

double FinDimSystem::k1() const {
  if (kind == Kind::Example3)
    throw std::invalid_argument("example3 has a state-dependent bracket");
  Eigen::MatrixXd Km(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Km(i, j) = K[static_cast<std::size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Km);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  double best = 0.0;
  for (int i = 0; i < n; ++i) {
    const double lam = es.eigenvalues()[i];
    if (lam > 1e-12 && (best == 0.0 || lam < best)) best = lam;
  }
  if (best == 0.0) throw std::runtime_error("K has no positive eigenvalue");
  return best;
}

std::vector<double> FinDimSystem::equilibrium(double eta) const {
  std::vector<double> z(n, 0.0);
  switch (kind) {
    case Kind::Example1: {
      const double hs = dot(h, s);
      for (int i = 0; i < n; ++i) z[i] = eta * h[i] - (s[i] - hs * h[i]);
      break;
    }
    case Kind::Example2:
      for (int i = 0; i < n; ++i) z[i] = eta * h[i];
      break;
    case Kind::Example3: {
      if (eta <= 0.0) throw std::invalid_argument("example3 requires eta > 0");
      const double f = -std::sqrt(2.0 * eta) / norm(s);
      for (int i = 0; i < n; ++i) z[i] = f * s[i];
      break;
    }
  }
  return z;
}

double FinDimSystem::entropy_floor(double eta) const {
  switch (kind) {
    case Kind::Example1: return entropy(equilibrium(eta));
    case Kind::Example2: return eta * eta / (1.0 + eta * eta);
    case Kind::Example3: return -std::sqrt(2.0 * eta) * norm(s);
  }
  throw std::logic_error("unreachable");
}

std::vector<double> analytic_solution_example1(const FinDimSystem& sys,
                                               const std::vector<double>& z0, double t) {
  if (sys.kind != FinDimSystem::Kind::Example1)
    throw std::invalid_argument("closed-form orbit is for example1");
  const int n = sys.n;
  Eigen::MatrixXd Km(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Km(i, j) = sys.K[static_cast<std::size_t>(i) * n + j];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Km);
  if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
  Eigen::VectorXd y0(n);
  for (int i = 0; i < n; ++i) y0[i] = z0[i] + sys.s[i];
  Eigen::VectorXd y = Eigen::VectorXd::Zero(n);
  for (int m = 0; m < n; ++m) {
    const double lam = es.eigenvalues()[m];
    const Eigen::VectorXd e = es.eigenvectors().col(m);
    const double c = e.dot(y0);
    y += (lam <= 1e-12 ? c : c * std::exp(-t * lam)) * e;
  }
  std::vector<double> z(n);
  for (int i = 0; i < n; ++i) z[i] = y[i] - sys.s[i];
  return z;
}

double pl_constant(const FinDimSystem& sys, double eta, double ball_radius) {
  switch (sys.kind) {
    case FinDimSystem::Kind::Example1:
      return 2.0 * sys.k1();
    case FinDimSystem::Kind::Example2: {
      const double R2 = ball_radius * ball_radius;
      return 4.0 * sys.k1() * (1.0 + eta * eta) / ((1.0 + R2) * (1.0 + R2) * (1.0 + R2));
    }
    case FinDimSystem::Kind::Example3: {
      std::vector<double> s = sys.s;
      return std::sqrt(2.0 * eta) * norm(s);
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// grad S . K(z) grad S at z
double bracket_ss(const FinDimSystem& sys, const std::vector<double>& z) {
  std::vector<double> g = sys.grad_entropy(z);
  if (sys.kind == FinDimSystem::Kind::Example3) {
    const double zz = dot(z, z);
    const double zg = dot(z, g);
    double val = 0.0;
    for (int i = 0; i < sys.n; ++i) val += g[i] * (zz * g[i] - z[i] * zg);
    return val;
  }
  return dot(g, matvec(sys.K, g));
}

} // namespace

PlReport check_pl_inequality(const FinDimSystem& sys, double eta, int n_samples,
                             std::uint64_t seed, double ball_radius) {
  if (n_samples <= 0) throw std::invalid_argument("need at least one sample");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const double kappa = pl_constant(sys, eta, ball_radius);
  const double floor = sys.entropy_floor(eta);

  PlReport rep;
  rep.samples = n_samples;
  double min_margin = 0.0;
  double scale = 0.0;
  bool first = true;
  int accepted = 0;
  while (accepted < n_samples) {
    std::vector<double> z(sys.n);
    for (double& x : z) x = gauss(rng);
    if (sys.kind == FinDimSystem::Kind::Example3) {
      // uniform points on the sphere of radius sqrt(2 eta), z.s < 0
      const double nn = norm(z);
      if (nn == 0.0) continue;
      const double f = std::sqrt(2.0 * eta) / nn;
      for (double& x : z) x *= f;
      if (dot(z, sys.s) >= 0.0) continue;
    } else {
      // z = eta h + (I - h h^T) xi
      const double c = dot(z, sys.h);
      for (int i = 0; i < sys.n; ++i) z[i] = eta * sys.h[i] + (z[i] - c * sys.h[i]);
      if (sys.kind == FinDimSystem::Kind::Example2 && norm(z) > ball_radius) continue;
    }
    ++accepted;
    const double lhs = bracket_ss(sys, z);
    const double excess = sys.entropy(z) - floor;
    const double margin = lhs - kappa * excess;
    scale = std::max({scale, std::abs(lhs), std::abs(kappa * excess)});
    if (first || margin < min_margin) {
      min_margin = margin;
      first = false;
    }
  }
  rep.min_margin = min_margin;
  rep.scale = scale;
  rep.satisfied = min_margin >= -1e-10 * std::max(scale, 1e-300);
  return rep;
}

/// Pointwise PL' margin (used by tests probing specific states).
double pl_margin(const FinDimSystem& sys, const std::vector<double>& z, double kappa) {
  const double eta = sys.hamiltonian(z);
  return bracket_ss(sys, z) - kappa * (sys.entropy(z) - sys.entropy_floor(eta));
}

} // namespace metrix
