#include "metrix/presets.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace metrix {

namespace {

constexpr double kPi = 3.14159265358979323846;

ExperimentConfig base(const std::string& name) {
  ExperimentConfig cfg;
  cfg.problem = name;
  cfg.out_dir = "out";
  return cfg;
}

std::vector<ExperimentConfig> build_presets() {
  std::vector<ExperimentConfig> out;

  { // heat relaxation on the periodic line
    ExperimentConfig c = base("heat1d");
    c.resolution = 64;
    c.ic.seed = 2024;
    c.ic.modes = 5;
    c.run = RunConfig{};
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 5.0;
    c.run.record_every = 5;
    c.run.snapshot_times = {0.0, 5.0};
    out.push_back(c);
  }
  { // parallel diffusion across an island chain (fixed advecting potential)
    ExperimentConfig c = base("advection-double");
    c.resolution = 128;
    c.ic.x0 = kPi;
    c.ic.y0 = kPi + 0.1;
    c.ic.w1 = 0.25;
    c.ic.w2 = 0.4;
    c.ic.amplitude = 1.0 / (2.0 * kPi * 0.25 * 0.4);
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 2e-4;
    c.run.t_end = 12.0;
    c.run.record_every = 250;
    c.run.snapshot_times = {0.0, 12.0};
    out.push_back(c);
  }
  { // projector relaxation with the same linear-advection energy
    ExperimentConfig c = base("advection-projector");
    c.resolution = 128;
    c.ic.x0 = kPi;
    c.ic.y0 = kPi + 0.1;
    c.ic.w1 = 0.25;
    c.ic.w2 = 0.4;
    c.ic.amplitude = 1.0 / (2.0 * kPi * 0.25 * 0.4);
    c.run.integrator = Integrator::ImplicitMidpoint;
    c.run.dt = 1e-3;
    c.run.t_end = 20.0;
    c.run.record_every = 50;
    c.run.snapshot_times = {0.0, 20.0};
    out.push_back(c);
  }
  { // vortex relaxation, paired-bracket diffusion (incomplete relaxation)
    ExperimentConfig c = base("euler-double");
    c.resolution = 128;
    c.ic.x0 = kPi;
    c.ic.y0 = kPi;
    c.ic.w1 = 0.3;
    c.ic.w2 = 1.0;
    c.ic.amplitude = 1.0;
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 20.0;
    c.run.record_every = 100;
    c.run.snapshot_times = {0.0, 20.0};
    out.push_back(c);
  }
  { // vortex relaxation, projector bracket (complete relaxation)
    ExperimentConfig c = base("euler-projector");
    c.resolution = 128;
    c.ic.x0 = kPi;
    c.ic.y0 = kPi;
    c.ic.w1 = 0.3;
    c.ic.w2 = 1.0;
    c.ic.amplitude = 1.0;
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 20.0;
    c.run.record_every = 50;
    c.run.snapshot_times = {0.0, 20.0};
    out.push_back(c);
  }
  { // collision-like relaxation to the ground-state vortex, quadratic entropy
    ExperimentConfig c = base("euler-collision-quadratic");
    c.resolution = 64;
    c.ic.x0 = 0.5;
    c.ic.y0 = 0.5;
    c.ic.w1 = 0.1;                  // w1^2 = 0.01
    c.ic.w2 = std::sqrt(0.07);      // w2^2 = 0.07
    c.ic.amplitude = 1.0;
    c.run.integrator = Integrator::ImplicitMidpoint;
    c.run.dt = 5e-3;
    c.run.t_end = 400.0;
    c.run.record_every = 200;
    c.run.snapshot_times = {0.0, 400.0};
    out.push_back(c);
  }
  { // collision-like relaxation with the Gibbs entropy density
    ExperimentConfig c = base("euler-collision-gibbs");
    c.resolution = 64;
    c.ic.x0 = 0.5;
    c.ic.y0 = 0.5;
    c.ic.w1 = 0.1;
    c.ic.w2 = std::sqrt(0.07);
    c.ic.amplitude = 10.0;
    c.run.integrator = Integrator::ImplicitMidpoint;
    c.run.dt = 1e-3;
    c.run.t_end = 40.0;
    c.run.record_every = 200;
    c.run.snapshot_times = {0.0, 40.0};
    out.push_back(c);
  }
  { // collision-like relaxation from a perturbed high-mode equilibrium
    ExperimentConfig c = base("euler-perturbed-collision");
    c.resolution = 64;
    c.ic.x0 = 0.5;
    c.ic.y0 = 0.5;
    c.ic.w1 = 0.1;
    c.ic.w2 = std::sqrt(0.07);
    c.ic.amplitude = 0.01;
    c.run.integrator = Integrator::ImplicitMidpoint;
    c.run.dt = 5e-3;
    c.run.t_end = 400.0;
    c.run.record_every = 200;
    c.run.snapshot_times = {0.0, 400.0};
    out.push_back(c);
  }
  { // axisymmetric flux relaxation on the rectangular cross-section
    ExperimentConfig c = base("gs-collision");
    c.resolution = 64;
    c.ic.x0 = 4.0;
    c.ic.y0 = 0.0;
    c.ic.w1 = std::sqrt(0.5);
    c.ic.w2 = std::sqrt(3.2);
    c.ic.amplitude = 1.0;
    c.run.integrator = Integrator::ImplicitMidpoint;
    c.run.dt = 2e-3;
    c.run.t_end = 60.0;
    c.run.record_every = 100;
    c.run.snapshot_times = {0.0, 60.0};
    out.push_back(c);
  }
  { // magneto-frictional force-free relaxation in the periodic box
    ExperimentConfig c = base("beltrami3d");
    c.resolution = 32;
    c.ic.a = 1.0;
    c.ic.m = 1;
    c.ic.nmode = 1;
    c.ic.normalize = true;
    c.run.integrator = Integrator::Rk4;
    c.run.auto_dt = true;
    c.run.dt = 1e-3; // cap used when auto stepping
    c.run.t_end = 0.5;
    c.run.record_every = 10;
    c.run.snapshot_times = {0.0, 0.5};
    out.push_back(c);
  }
  { // linear bracket with known spectrum and closed-form orbits
    ExperimentConfig c = base("findim-ex1");
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 20.0;
    c.run.record_every = 100;
    out.push_back(c);
  }
  { // saturating entropy; decay constant valid on bounded balls only
    ExperimentConfig c = base("findim-ex2");
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 20.0;
    c.run.record_every = 100;
    out.push_back(c);
  }
  { // sphere-projector bracket with state-dependent kernel
    ExperimentConfig c = base("findim-ex3");
    c.run.integrator = Integrator::Rk4;
    c.run.dt = 1e-3;
    c.run.t_end = 50.0;
    c.run.record_every = 100;
    out.push_back(c);
  }
  return out;
}

const std::vector<ExperimentConfig>& preset_configs() {
  static const std::vector<ExperimentConfig> presets = build_presets();
  return presets;
}

PresetInfo info_for(const ExperimentConfig& c) {
  PresetInfo info;
  info.name = c.problem;
  info.resolution = c.resolution;
  info.dt = c.run.auto_dt ? "auto" : [&] {
    std::ostringstream os;
    os << c.run.dt;
    return os.str();
  }();
  info.t_end = c.run.t_end;
  if (c.problem == "heat1d") {
    info.summary = "heat flow on the periodic line";
    info.reference = "entropy excess decays at rate 2";
  } else if (c.problem == "advection-double") {
    info.summary = "parallel diffusion across an island chain";
    info.reference = "relaxes to contour averages, not the energy-matched profile";
  } else if (c.problem == "advection-projector") {
    info.summary = "projector bracket, fixed advecting potential";
    info.reference = "closed-form exponential approach to the relaxed profile";
  } else if (c.problem == "euler-double") {
    info.summary = "vortex under the paired-bracket diffusion";
    info.reference = "entropy stalls above the constrained minimum";
  } else if (c.problem == "euler-projector") {
    info.summary = "vortex under the projector bracket";
    info.reference = "entropy reaches H0; lowest-mode profile recovered";
  } else if (c.problem == "euler-collision-quadratic") {
    info.summary = "collision-like bracket, quadratic entropy";
    info.reference = "relaxed slope omega/phi near 2 pi^2";
  } else if (c.problem == "euler-collision-gibbs") {
    info.summary = "collision-like bracket, Gibbs entropy";
    info.reference = "1 + log(omega) linear in phi; multiplier cross-check";
  } else if (c.problem == "euler-perturbed-collision") {
    info.summary = "collision-like bracket, perturbed high-mode start";
    info.reference = "escapes the nearby critical point, reaches the ground state";
  } else if (c.problem == "gs-collision") {
    info.summary = "collision-like bracket for axisymmetric flux";
    info.reference = "u/(C r^2 + D) linear in psi";
  } else if (c.problem == "beltrami3d") {
    info.summary = "magneto-frictional relaxation, helical start";
    info.reference = "energy decays at fixed helicity; force residual drops";
  } else if (c.problem == "findim-ex1") {
    info.summary = "ODE bracket with constant kernel";
    info.reference = "orbit matches the closed form; decay rate 2 K1";
  } else if (c.problem == "findim-ex2") {
    info.summary = "ODE bracket with saturating entropy";
    info.reference = "ball-restricted decay constant";
  } else if (c.problem == "findim-ex3") {
    info.summary = "ODE sphere-projector bracket";
    info.reference = "decay constant sqrt(2 eta)|s|";
  }
  return info;
}

} // namespace

const std::vector<PresetInfo>& preset_table() {
  static const std::vector<PresetInfo> table = [] {
    std::vector<PresetInfo> t;
    for (const auto& c : preset_configs()) t.push_back(info_for(c));
    return t;
  }();
  return table;
}

bool is_preset(const std::string& name) {
  for (const auto& c : preset_configs())
    if (c.problem == name) return true;
  return false;
}

ExperimentConfig preset_config(const std::string& name) {
  for (const auto& c : preset_configs())
    if (c.problem == name) return c;
  throw std::invalid_argument("unknown preset: " + name);
}

void apply_paper_scale(ExperimentConfig& cfg) {
  cfg.paper_scale = true;
  if (cfg.problem == "advection-double" || cfg.problem == "advection-projector") {
    cfg.resolution = 256;
    if (cfg.problem == "advection-double") cfg.run.dt = 1e-4;
  } else if (cfg.problem == "euler-double" || cfg.problem == "euler-projector") {
    cfg.resolution = 256;
  }
}

std::string format_preset_table() {
  std::ostringstream os;
  os << "preset                      n     dt        t_end  purpose\n";
  for (const auto& p : preset_table()) {
    os << p.name;
    for (std::size_t i = p.name.size(); i < 28; ++i) os << ' ';
    std::ostringstream nres;
    if (p.resolution > 0) nres << p.resolution;
    else nres << "-";
    os << nres.str();
    for (std::size_t i = nres.str().size(); i < 6; ++i) os << ' ';
    os << p.dt;
    for (std::size_t i = p.dt.size(); i < 10; ++i) os << ' ';
    std::ostringstream te;
    te << p.t_end;
    os << te.str();
    for (std::size_t i = te.str().size(); i < 7; ++i) os << ' ';
    os << p.summary << "; " << p.reference << "\n";
  }
  return os.str();
}

} // namespace metrix
