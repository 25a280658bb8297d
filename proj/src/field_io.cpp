#include "metrix/field_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace metrix {

static_assert(std::endian::native == std::endian::little,
              "snapshot format assumes a little-endian host");

namespace {

std::string format_double(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

std::string header_line(const GridSpec& g, int comps) {
  std::ostringstream os;
  os << "metrix-field v1 kind=" << grid_kind_name(g.kind) << " n=";
  for (int a = 0; a < g.dim; ++a) os << (a ? "," : "") << g.n[a];
  os << " extent=";
  for (int a = 0; a < g.dim; ++a)
    os << (a ? "," : "") << format_double(g.extent[a][0]) << ":"
       << format_double(g.extent[a][1]);
  if (comps > 1) os << " comps=" << comps;
  os << "\n";
  return os.str();
}

void write_values(std::ostream& os, const std::vector<double>& v) {
  os.write(reinterpret_cast<const char*>(v.data()),
           static_cast<std::streamsize>(v.size() * sizeof(double)));
  if (!os) throw std::runtime_error("field write failed");
}

struct Header {
  GridSpec grid;
  int comps = 1;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

Header parse_header(const std::string& line) {
  std::istringstream is(line);
  std::string magic, version;
  is >> magic >> version;
  if (magic != "metrix-field" || version != "v1")
    throw std::runtime_error("not a metrix-field v1 snapshot");
  std::string tok;
  std::string kind;
  std::vector<int> n;
  std::vector<std::array<double, 2>> ext;
  int comps = 1;
  while (is >> tok) {
    const auto eq = tok.find('=');
    if (eq == std::string::npos) throw std::runtime_error("malformed header token: " + tok);
    const std::string key = tok.substr(0, eq);
    const std::string val = tok.substr(eq + 1);
    if (key == "kind") {
      kind = val;
    } else if (key == "n") {
      for (const auto& p : split(val, ',')) n.push_back(std::stoi(p));
    } else if (key == "extent") {
      for (const auto& p : split(val, ',')) {
        const auto parts = split(p, ':');
        if (parts.size() != 2) throw std::runtime_error("malformed extent: " + p);
        ext.push_back({std::stod(parts[0]), std::stod(parts[1])});
      }
    } else if (key == "comps") {
      comps = std::stoi(val);
    } else {
      throw std::runtime_error("unknown header key: " + key);
    }
  }
  if (n.empty() || n.size() != ext.size())
    throw std::runtime_error("header n/extent mismatch");
  Header h;
  const GridKind gk = grid_kind_from_name(kind);
  switch (gk) {
    case GridKind::Torus2D: h.grid = GridSpec::torus2d(n.at(0)); break;
    case GridKind::PeriodicLine1D: h.grid = GridSpec::periodic_line1d(n.at(0)); break;
    case GridKind::Torus3D: h.grid = GridSpec::torus3d(n.at(0)); break;
    case GridKind::DirichletRect2D:
      h.grid = GridSpec::dirichlet_rect2d(n.at(0), n.at(1), ext.at(0)[1], ext.at(1)[1]);
      break;
    case GridKind::GsRect2D:
      h.grid = GridSpec::gs_rect2d(n.at(0), n.at(1), ext.at(0)[0], ext.at(0)[1],
                                   ext.at(1)[0], ext.at(1)[1]);
      break;
  }
  for (std::size_t a = 0; a < n.size(); ++a) {
    if (h.grid.n[a] != n[a]) throw std::runtime_error("inconsistent header resolution");
    h.grid.extent[a] = ext[a];
  }
  h.comps = comps;
  return h;
}

Header read_header(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("missing snapshot header");
  return parse_header(line);
}

std::vector<double> read_values(std::istream& is, std::size_t count) {
  std::vector<double> v(count);
  is.read(reinterpret_cast<char*>(v.data()),
          static_cast<std::streamsize>(count * sizeof(double)));
  if (static_cast<std::size_t>(is.gcount()) != count * sizeof(double))
    throw std::runtime_error("snapshot truncated");
  return v;
}

} // namespace

void write_field(std::ostream& os, const ScalarField& f) {
  os << header_line(f.grid, 1);
  write_values(os, f.v);
}

void write_field(std::ostream& os, const VectorField& f) {
  os << header_line(f.grid, f.comps);
  write_values(os, f.v);
}

void write_field(const std::string& path, const ScalarField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_field(os, f);
}

void write_field(const std::string& path, const VectorField& f) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open " + path);
  write_field(os, f);
}

ScalarField read_scalar_field(std::istream& is) {
  Header h = read_header(is);
  if (h.comps != 1) throw std::runtime_error("expected a scalar snapshot");
  ScalarField f(h.grid);
  f.v = read_values(is, h.grid.size());
  return f;
}

VectorField read_vector_field(std::istream& is) {
  Header h = read_header(is);
  VectorField f(h.grid, h.comps);
  f.v = read_values(is, h.grid.size() * static_cast<std::size_t>(h.comps));
  return f;
}

ScalarField read_scalar_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_scalar_field(is);
}

VectorField read_vector_field(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path);
  return read_vector_field(is);
}

} // namespace metrix
