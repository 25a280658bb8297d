#include "metrix/config.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <sstream>

#include "metrix/presets.hpp"

namespace metrix {

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  auto run_eq = [&]() {
    return run.integrator == o.run.integrator && run.dt == o.run.dt &&
           run.auto_dt == o.run.auto_dt && run.t_end == o.run.t_end &&
           run.stop_tol == o.run.stop_tol && run.record_every == o.run.record_every &&
           run.snapshot_times == o.run.snapshot_times;
  };
  auto ic_eq = [&]() {
    return ic.x0 == o.ic.x0 && ic.y0 == o.ic.y0 && ic.w1 == o.ic.w1 && ic.w2 == o.ic.w2 &&
           ic.amplitude == o.ic.amplitude && ic.seed == o.ic.seed && ic.modes == o.ic.modes &&
           ic.a == o.ic.a && ic.m == o.ic.m && ic.nmode == o.ic.nmode &&
           ic.normalize == o.ic.normalize;
  };
  return problem == o.problem && resolution == o.resolution && out_dir == o.out_dir &&
         paper_scale == o.paper_scale && run_eq() && ic_eq();
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

// Which [initial] keys each problem accepts.
enum IcGroup { kGaussian = 1, kModes = 2, kHelical = 4 };

int ic_groups_for(const std::string& problem) {
  if (problem == "heat1d") return kModes;
  if (problem == "beltrami3d") return kHelical;
  if (problem.rfind("findim-", 0) == 0) return 0;
  return kGaussian;
}

bool uses_grid(const std::string& problem) { return problem.rfind("findim-", 0) != 0; }

struct Parser {
  ExperimentConfig cfg;
  std::vector<ParseError> errors;
  int groups = 0;
  bool grid_ok = false;

  void error(int line, const std::string& msg) { errors.push_back({line, msg}); }

  bool parse_double(int line, const std::string& key, const std::string& val, double& out) {
    try {
      std::size_t pos = 0;
      out = std::stod(val, &pos);
      if (pos != val.size()) throw std::invalid_argument("");
      return true;
    } catch (...) {
      error(line, key + ": expected a number, got '" + val + "'");
      return false;
    }
  }

  bool parse_int(int line, const std::string& key, const std::string& val, int& out) {
    try {
      std::size_t pos = 0;
      out = std::stoi(val, &pos);
      if (pos != val.size()) throw std::invalid_argument("");
      return true;
    } catch (...) {
      error(line, key + ": expected an integer, got '" + val + "'");
      return false;
    }
  }

  bool parse_bool(int line, const std::string& key, const std::string& val, bool& out) {
    if (val == "true") { out = true; return true; }
    if (val == "false") { out = false; return true; }
    error(line, key + ": expected true or false, got '" + val + "'");
    return false;
  }

  void handle(int line, const std::string& section, const std::string& key,
              const std::string& val) {
    const std::string full = section.empty() ? key : section + "." + key;
    if (section == "grid") {
      if (key != "n") return error(line, "unknown key '" + full + "'");
      if (!grid_ok) return error(line, "grid.n does not apply to " + cfg.problem);
      int n = 0;
      if (parse_int(line, full, val, n)) {
        if (n < 8) return error(line, "grid.n must be >= 8");
        cfg.resolution = n;
      }
      return;
    }
    if (section == "initial") {
      auto need = [&](int group) {
        if (groups & group) return true;
        error(line, "initial." + key + " does not apply to " + cfg.problem);
        return false;
      };
      if (key == "x0") { if (need(kGaussian)) parse_double(line, full, val, cfg.ic.x0); return; }
      if (key == "y0") { if (need(kGaussian)) parse_double(line, full, val, cfg.ic.y0); return; }
      if (key == "w1") { if (need(kGaussian)) parse_double(line, full, val, cfg.ic.w1); return; }
      if (key == "w2") { if (need(kGaussian)) parse_double(line, full, val, cfg.ic.w2); return; }
      if (key == "amplitude") {
        if (need(kGaussian)) parse_double(line, full, val, cfg.ic.amplitude);
        return;
      }
      if (key == "seed") {
        if (!need(kModes)) return;
        int s = 0;
        if (parse_int(line, full, val, s)) cfg.ic.seed = static_cast<std::uint64_t>(s);
        return;
      }
      if (key == "modes") {
        if (!need(kModes)) return;
        int m = 0;
        if (parse_int(line, full, val, m)) {
          if (m < 1) return error(line, "initial.modes must be >= 1");
          cfg.ic.modes = m;
        }
        return;
      }
      if (key == "a") { if (need(kHelical)) parse_double(line, full, val, cfg.ic.a); return; }
      if (key == "m") { if (need(kHelical)) parse_int(line, full, val, cfg.ic.m); return; }
      if (key == "nmode") {
        if (need(kHelical)) parse_int(line, full, val, cfg.ic.nmode);
        return;
      }
      if (key == "normalize") {
        if (need(kHelical)) parse_bool(line, full, val, cfg.ic.normalize);
        return;
      }
      return error(line, "unknown key '" + full + "'");
    }
    if (section == "run") {
      if (key == "integrator") {
        if (val == "rk4") cfg.run.integrator = Integrator::Rk4;
        else if (val == "implicit-midpoint") cfg.run.integrator = Integrator::ImplicitMidpoint;
        else error(line, "run.integrator must be rk4 or implicit-midpoint");
        return;
      }
      if (key == "dt") {
        if (val == "auto") {
          if (cfg.problem != "beltrami3d")
            return error(line, "run.dt = auto applies only to beltrami3d");
          cfg.run.auto_dt = true;
          return;
        }
        double dt = 0.0;
        if (parse_double(line, full, val, dt)) {
          if (!(dt > 0.0)) return error(line, "run.dt must be positive");
          cfg.run.dt = dt;
          cfg.run.auto_dt = false;
        }
        return;
      }
      if (key == "t_end") {
        double t = 0.0;
        if (parse_double(line, full, val, t)) {
          if (t < 0.0) return error(line, "run.t_end must be nonnegative");
          cfg.run.t_end = t;
        }
        return;
      }
      if (key == "stop_tol") {
        double s = 0.0;
        if (parse_double(line, full, val, s)) {
          if (s < 0.0 || s >= 1.0) return error(line, "run.stop_tol must be in [0,1)");
          cfg.run.stop_tol = s;
        }
        return;
      }
      if (key == "record_every") {
        int r = 0;
        if (parse_int(line, full, val, r)) {
          if (r < 1) return error(line, "run.record_every must be >= 1");
          cfg.run.record_every = r;
        }
        return;
      }
      if (key == "snapshot_times") {
        std::vector<double> times;
        std::stringstream ss(val);
        std::string part;
        bool ok = true;
        while (std::getline(ss, part, ',')) {
          part = trim(part);
          if (part.empty()) continue;
          double t = 0.0;
          if (!parse_double(line, full, part, t)) { ok = false; break; }
          times.push_back(t);
        }
        if (ok) cfg.run.snapshot_times = std::move(times);
        return;
      }
      return error(line, "unknown key '" + full + "'");
    }
    if (section == "output") {
      if (key == "dir") {
        cfg.out_dir = val;
        return;
      }
      return error(line, "unknown key '" + full + "'");
    }
    if (section.empty()) {
      if (key == "problem") return; // handled in the first pass
      if (key == "paper_scale") {
        bool b = false;
        if (parse_bool(line, full, val, b) && b) apply_paper_scale(cfg);
        cfg.paper_scale = b;
        return;
      }
      return error(line, "unknown key '" + key + "'");
    }
    error(line, "unknown section [" + section + "]");
  }
};

} // namespace

ParseResult parse_config(const std::string& text) {
  ParseResult result;
  // first pass: find the problem name
  std::string problem;
  int problem_line = 0;
  {
    std::istringstream is(text);
    std::string line;
    int ln = 0;
    while (std::getline(is, line)) {
      ++ln;
      std::string t = trim(line);
      const auto hash = t.find('#');
      if (hash != std::string::npos) t = trim(t.substr(0, hash));
      if (t.empty() || t.front() == '[') continue;
      const auto eq = t.find('=');
      if (eq == std::string::npos) continue;
      if (trim(t.substr(0, eq)) == "problem") {
        problem = trim(t.substr(eq + 1));
        problem_line = ln;
        break;
      }
    }
  }
  if (problem.empty()) {
    result.errors.push_back({0, "missing required key 'problem'"});
    return result;
  }
  if (!is_preset(problem)) {
    result.errors.push_back({problem_line, "unknown problem '" + problem + "'"});
    return result;
  }

  Parser p;
  p.cfg = preset_config(problem);
  p.groups = ic_groups_for(problem);
  p.grid_ok = uses_grid(problem);

  std::istringstream is(text);
  std::string line;
  std::string section;
  int ln = 0;
  while (std::getline(is, line)) {
    ++ln;
    std::string t = trim(line);
    const auto hash = t.find('#');
    if (hash != std::string::npos) t = trim(t.substr(0, hash));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') {
        p.error(ln, "malformed section header: " + t);
        continue;
      }
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      p.error(ln, "expected 'key = value': " + t);
      continue;
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (section.empty() && key == "problem") {
      if (ln != problem_line) p.error(ln, "problem may be set only once");
      continue;
    }
    p.handle(ln, section, key, val);
  }

  result.errors = std::move(p.errors);
  if (result.errors.empty()) result.config = std::move(p.cfg);
  return result;
}

std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << "problem = " << cfg.problem << "\n";
  if (cfg.paper_scale) os << "paper_scale = true\n";
  os << "\n";
  if (uses_grid(cfg.problem)) {
    os << "[grid]\n";
    os << "n = " << cfg.resolution << "\n\n";
  }
  const int groups = ic_groups_for(cfg.problem);
  if (groups != 0) {
    os << "[initial]\n";
    if (groups & kGaussian) {
      os << "x0 = " << fmt(cfg.ic.x0) << "\n";
      os << "y0 = " << fmt(cfg.ic.y0) << "\n";
      os << "w1 = " << fmt(cfg.ic.w1) << "\n";
      os << "w2 = " << fmt(cfg.ic.w2) << "\n";
      os << "amplitude = " << fmt(cfg.ic.amplitude) << "\n";
    }
    if (groups & kModes) {
      os << "seed = " << cfg.ic.seed << "\n";
      os << "modes = " << cfg.ic.modes << "\n";
    }
    if (groups & kHelical) {
      os << "a = " << fmt(cfg.ic.a) << "\n";
      os << "m = " << cfg.ic.m << "\n";
      os << "nmode = " << cfg.ic.nmode << "\n";
      os << "normalize = " << (cfg.ic.normalize ? "true" : "false") << "\n";
    }
    os << "\n";
  }
  os << "[run]\n";
  os << "integrator = "
     << (cfg.run.integrator == Integrator::Rk4 ? "rk4" : "implicit-midpoint") << "\n";
  os << "dt = " << (cfg.run.auto_dt ? std::string("auto") : fmt(cfg.run.dt)) << "\n";
  os << "t_end = " << fmt(cfg.run.t_end) << "\n";
  os << "stop_tol = " << fmt(cfg.run.stop_tol) << "\n";
  os << "record_every = " << cfg.run.record_every << "\n";
  if (!cfg.run.snapshot_times.empty()) {
    os << "snapshot_times = ";
    for (std::size_t i = 0; i < cfg.run.snapshot_times.size(); ++i)
      os << (i ? "," : "") << fmt(cfg.run.snapshot_times[i]);
    os << "\n";
  }
  os << "\n[output]\n";
  os << "dir = " << cfg.out_dir << "\n";
  return os.str();
}

} // namespace metrix
