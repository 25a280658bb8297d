#include <doctest.h>

#include <sstream>

#include "metrix/field_io.hpp"
#include "support/testing.hpp"

using namespace metrix;

TEST_CASE("snapshot header layout") {
  const GridSpec g = GridSpec::torus2d(16);
  ScalarField f = testing::random_field(g, 1);
  std::ostringstream os(std::ios::binary);
  write_field(os, f);
  const std::string blob = os.str();
  const auto nl = blob.find('\n');
  REQUIRE(nl != std::string::npos);
  const std::string header = blob.substr(0, nl);
  CHECK(header.rfind("metrix-field v1 kind=torus2d n=16,16 extent=0:", 0) == 0);
  // payload is exactly n1*n2 little-endian doubles
  CHECK(blob.size() - nl - 1 == g.size() * sizeof(double));
}

TEST_CASE("round trip preserves bits (property over grids)") {
  auto roundtrip_scalar = [](const GridSpec& g, std::uint64_t seed) {
    const ScalarField f = testing::random_field(g, seed);
    std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
    write_field(ss, f);
    const ScalarField back = read_scalar_field(ss);
    REQUIRE(back.grid.same_as(g));
    REQUIRE(back.v.size() == f.v.size());
    for (std::size_t i = 0; i < f.v.size(); ++i) CHECK(back.v[i] == f.v[i]);
  };
  roundtrip_scalar(GridSpec::torus2d(16), 10);
  roundtrip_scalar(GridSpec::periodic_line1d(32), 11);
  roundtrip_scalar(GridSpec::dirichlet_rect2d(16, 24), 12);
  roundtrip_scalar(GridSpec::gs_rect2d(16, 16), 13);

  const GridSpec g3 = GridSpec::torus3d(8);
  VectorField B(g3, 3);
  const ScalarField r = testing::random_field(GridSpec::torus3d(8), 14);
  for (int c = 0; c < 3; ++c)
    for (std::size_t i = 0; i < g3.size(); ++i) B.comp(c)[i] = r.v[i] * (c + 1);
  std::stringstream ss(std::ios::in | std::ios::out | std::ios::binary);
  write_field(ss, B);
  const VectorField back = read_vector_field(ss);
  REQUIRE(back.comps == 3);
  for (std::size_t i = 0; i < B.v.size(); ++i) CHECK(back.v[i] == B.v[i]);
}

TEST_CASE("malformed headers are rejected") {
  {
    std::stringstream ss("not-a-field v1 kind=torus2d n=16,16 extent=0:1,0:1\n");
    CHECK_THROWS(read_scalar_field(ss));
  }
  {
    std::stringstream ss("metrix-field v2 kind=torus2d n=16,16 extent=0:1,0:1\n");
    CHECK_THROWS(read_scalar_field(ss));
  }
  {
    // truncated payload
    const GridSpec g = GridSpec::torus2d(16);
    ScalarField f(g);
    std::ostringstream os(std::ios::binary);
    write_field(os, f);
    std::string blob = os.str();
    blob.resize(blob.size() - 8);
    std::istringstream is(blob, std::ios::binary);
    CHECK_THROWS(read_scalar_field(is));
  }
}
