#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "metrix/diagnostics.hpp"

namespace metrix {

using State = std::vector<double>;
using RhsFn = std::function<State(const State&)>;

enum class Integrator { Rk4, ImplicitMidpoint };

struct RunConfig {
  Integrator integrator = Integrator::Rk4;
  double dt = 1e-3;
  bool auto_dt = false; // magnetofrictional step control
  double t_end = 1.0;
  double stop_tol = 0.0; // stop when |rhs| <= stop_tol * |rhs(u0)|; 0 disables
  int record_every = 1;
  std::vector<double> snapshot_times;
  double midpoint_tol = 1e-13;
  int midpoint_max_iters = 50;

  void validate() const;
};

/// Classical 4th-order Runge-Kutta step. Throws on non-finite stage values
/// (the message names the offending stage).
State step_rk4(const RhsFn& rhs, const State& u, double dt);

/// Implicit midpoint via fixed-point iteration of u' = u + dt rhs((u+u')/2);
/// converges to `tol` (relative max-norm increment) or throws after
/// `max_iters` iterations.
State step_implicit_midpoint(const RhsFn& rhs, const State& u, double dt,
                             double tol = 1e-13, int max_iters = 50);

/// What `run` needs to know about a problem beyond the flat state vector.
struct ProblemHooks {
  RhsFn rhs;
  // L2(mu) norm of a raw rhs vector (stop criterion)
  std::function<double(const State&)> rhs_norm;
  // full diagnostics row at time t
  std::function<DiagnosticsRecord(double t, const State&)> record;
  // optional snapshot writer
  std::function<void(double t, const State&)> snapshot;
  // optional auto time step (magnetofrictional)
  std::function<double(const State&)> auto_dt;
};

struct Trajectory {
  std::vector<DiagnosticsRecord> records;
  State final_state;
  double final_time = 0.0;
  long long steps = 0;
  bool stopped_early = false;  // stop_tol reached
  bool failed = false;         // integrator error; trajectory is partial
  std::string failure;
};

/// Advance to t_end (or the stop criterion), recording diagnostics every
/// `record_every` steps and at the final time. Integrator errors produce a
/// partial trajectory with `failed` set.
Trajectory run(const ProblemHooks& hooks, const State& u0, const RunConfig& cfg);

} // namespace metrix
