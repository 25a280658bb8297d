#pragma once

#include <iosfwd>
#include <string>

#include "metrix/grid.hpp"

namespace metrix {

// Snapshot format: one ASCII header line
//   metrix-field v1 kind=<grid-kind> n=<n1[,n2[,n3]]> extent=<lo:hi[,lo:hi[,lo:hi]]>
// (vector fields append " comps=<c>"), terminated by '\n', followed by the
// node-ordered values as little-endian IEEE-754 doubles (components
// concatenated for vector fields).

void write_field(std::ostream& os, const ScalarField& f);
void write_field(std::ostream& os, const VectorField& f);
void write_field(const std::string& path, const ScalarField& f);
void write_field(const std::string& path, const VectorField& f);

ScalarField read_scalar_field(std::istream& is);
ScalarField read_scalar_field(const std::string& path);
VectorField read_vector_field(std::istream& is);
VectorField read_vector_field(const std::string& path);

} // namespace metrix
