#include "metrix/timeint.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metrix {

void RunConfig::validate() const {
  if (!auto_dt && !(dt > 0.0)) throw std::invalid_argument("dt must be positive");
  if (t_end < 0.0) throw std::invalid_argument("t_end must be nonnegative");
  if (stop_tol < 0.0 || stop_tol >= 1.0) throw std::invalid_argument("stop_tol must be in [0,1)");
  if (record_every < 1) throw std::invalid_argument("record_every must be >= 1");
}

namespace {

void check_stage(const State& k, const char* stage) {
  for (double x : k)
    if (!std::isfinite(x))
      throw std::runtime_error(std::string("rk4: non-finite value in stage ") + stage);
}

State axpy(const State& u, double a, const State& k) {
  State out(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + a * k[i];
  return out;
}

} // namespace

State step_rk4(const RhsFn& rhs, const State& u, double dt) {
  State k1 = rhs(u);
  check_stage(k1, "1");
  State k2 = rhs(axpy(u, 0.5 * dt, k1));
  check_stage(k2, "2");
  State k3 = rhs(axpy(u, 0.5 * dt, k2));
  check_stage(k3, "3");
  State k4 = rhs(axpy(u, dt, k3));
  check_stage(k4, "4");
  State out(u.size());
  const double c = dt / 6.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    out[i] = u[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

State step_implicit_midpoint(const RhsFn& rhs, const State& u, double dt, double tol,
                             int max_iters) {
  State next = u;
  State mid(u.size());
  double unorm = 0.0;
  for (double x : u) unorm = std::max(unorm, std::abs(x));
  const double target = tol * std::max(1.0, unorm);
  for (int it = 0; it < max_iters; ++it) {
    for (std::size_t i = 0; i < u.size(); ++i) mid[i] = 0.5 * (u[i] + next[i]);
    State f = rhs(mid);
    double delta = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
      const double cand = u[i] + dt * f[i];
      delta = std::max(delta, std::abs(cand - next[i]));
      next[i] = cand;
    }
    if (!std::isfinite(delta))
      throw std::runtime_error("implicit midpoint: non-finite iterate");
    if (delta <= target) return next;
  }
  std::ostringstream msg;
  msg << "implicit midpoint: fixed point did not converge in " << max_iters
      << " iterations (reduce dt)";
  throw std::runtime_error(msg.str());
}

Trajectory run(const ProblemHooks& hooks, const State& u0, const RunConfig& cfg) {
  cfg.validate();
  Trajectory traj;
  State u = u0;
  double t = 0.0;

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  auto emit_snapshots = [&](double now) {
    while (next_snap < snaps.size() && snaps[next_snap] <= now + 1e-12) {
      if (hooks.snapshot) hooks.snapshot(now, u);
      ++next_snap;
    }
  };

  double rhs0_norm = -1.0;
  auto record_now = [&]() {
    DiagnosticsRecord rec = hooks.record(t, u);
    if (hooks.rhs_norm) {
      rec.rhs_norm = hooks.rhs_norm(hooks.rhs(u));
      if (rhs0_norm < 0.0) rhs0_norm = rec.rhs_norm;
    }
    traj.records.push_back(std::move(rec));
    return traj.records.back().rhs_norm;
  };

  record_now();
  emit_snapshots(t);

  try {
    long long steps_since_record = 0;
    while (t < cfg.t_end - 1e-14 * std::max(1.0, cfg.t_end)) {
      double dt = cfg.auto_dt && hooks.auto_dt ? hooks.auto_dt(u) : cfg.dt;
      if (!(dt > 0.0)) throw std::runtime_error("nonpositive time step");
      dt = std::min(dt, cfg.t_end - t);
      u = cfg.integrator == Integrator::Rk4
              ? step_rk4(hooks.rhs, u, dt)
              : step_implicit_midpoint(hooks.rhs, u, dt, cfg.midpoint_tol,
                                       cfg.midpoint_max_iters);
      t += dt;
      ++traj.steps;
      ++steps_since_record;
      emit_snapshots(t);
      const bool at_end = t >= cfg.t_end - 1e-14 * std::max(1.0, cfg.t_end);
      if (steps_since_record >= cfg.record_every || at_end) {
        steps_since_record = 0;
        const double rn = record_now();
        if (cfg.stop_tol > 0.0 && rhs0_norm > 0.0 && rn <= cfg.stop_tol * rhs0_norm) {
          traj.stopped_early = true;
          break;
        }
      }
    }
  } catch (const std::exception& e) {
    traj.failed = true;
    traj.failure = e.what();
  }
  traj.final_state = std::move(u);
  traj.final_time = t;
  return traj;
}

} // namespace metrix
